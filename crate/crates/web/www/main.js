import init, { Demo } from "./pkg/msis_web.js";

const $ = (id) => document.getElementById(id);
const ZOOM = 2;

let demo = null;

function paint(canvas, rgba, width, height, zoom = ZOOM) {
  canvas.width = width;
  canvas.height = height;
  canvas.style.width = `${width * zoom}px`;
  canvas.style.height = `${height * zoom}px`;
  const data = new ImageData(new Uint8ClampedArray(rgba), width, height);
  canvas.getContext("2d").putImageData(data, 0, 0);
}

function gallery(container, count, side, pixelsFor, label, zoom) {
  container.replaceChildren();
  for (let i = 0; i < count; i++) {
    const cell = document.createElement("div");
    cell.className = "cell";
    const canvas = document.createElement("canvas");
    paint(canvas, pixelsFor(i), side, side, zoom);
    cell.append(canvas, `${label} ${i + 1}`);
    container.append(cell);
  }
}

function showEncode() {
  paint($("comparison"), demo.comparisonRgba(0), demo.comparisonWidth, demo.comparisonHeight, 1);
  $("key").textContent = demo.key();
  const clear = demo.clearTailBits();
  $("tail").innerHTML = clear > 0
    ? `<span class="warn">Comparison image too small: the last ${clear} bits of every secret are sent in the clear.</span>`
    : "The comparison image covers the whole pad.";

  const side = demo.secretSide;
  const shareSide = demo.shareSide;
  const planeZoom = side >= 64 ? 0.5 : 1;
  gallery($("secrets"), 8, side, (i) => demo.secretRgba(i), "secret", 1);
  gallery($("planes"), 8, shareSide, (i) => demo.binaryShareRgba(i), "binary share", planeZoom);
  paint($("share"), demo.shareRgba(), shareSide, shareSide);

  const s = demo.shareStats();
  const balance = Array.from(s.slice(3)).map((b) => b.toFixed(3)).join(" ");
  $("stats").innerHTML = `
    <p>${shareSide} &times; ${shareSide} pixels carrying 8 &times; ${side * side} secret pixels</p>
    <p>entropy ${s[0].toFixed(4)} bits/pixel</p>
    <p>histogram bins: min ${s[1]}, max ${s[2]}</p>
    <p>ones per bit plane (MSB..LSB): ${balance}</p>`;
}

function showDecode() {
  const offset = Number($("offset").value);
  $("offset-value").textContent = offset;
  const side = demo.secretSide;
  const all = demo.recoverRgba(offset);
  const stride = side * side * 4;
  gallery($("recovered"), 8, side, (i) => all.subarray(i * stride, (i + 1) * stride), "recovered", 1);

  const q = demo.quality(offset);
  const rows = ["<tr><th>image</th><th>SSIM</th><th>PSNR</th><th>RMSE</th></tr>"];
  for (let i = 0; i < 8; i++) {
    const [ssim, psnr, rmse] = [q[3 * i], q[3 * i + 1], q[3 * i + 2]];
    const cls = rmse === 0 ? "good" : "bad";
    rows.push(`<tr class="${cls}"><td>F${i + 1}</td><td>${ssim.toFixed(2)}</td>` +
      `<td>${Number.isFinite(psnr) ? psnr.toFixed(2) : "Inf"}</td>` +
      `<td>${rmse === 0 ? "0" : rmse.toFixed(2)}</td></tr>`);
  }
  $("quality").innerHTML = rows.join("");
}

function rebuild() {
  demo?.free();
  demo = new Demo(Number($("side").value), Number($("seed").value) >>> 0);
  showEncode();
  showDecode();
}

async function useUpload(file) {
  const bitmap = await createImageBitmap(file);
  const canvas = new OffscreenCanvas(bitmap.width, bitmap.height);
  const ctx = canvas.getContext("2d");
  ctx.drawImage(bitmap, 0, 0);
  const rgba = ctx.getImageData(0, 0, bitmap.width, bitmap.height).data;
  demo?.free();
  demo = Demo.withComparison(Number($("side").value), rgba, bitmap.width, bitmap.height);
  showEncode();
  showDecode();
}

await init();
$("side").addEventListener("change", rebuild);
$("seed").addEventListener("input", rebuild);
$("offset").addEventListener("input", showDecode);
$("upload").addEventListener("change", (e) => {
  const file = e.target.files[0];
  if (file) useUpload(file);
});
rebuild();
