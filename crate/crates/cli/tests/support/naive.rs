//! Bit-at-a-time reference encoder/decoder. Every step works on plain
//! `Vec<u8>` bit lists so it shares no code path with `msis_core`.

pub fn key(comparison: &[u8]) -> Vec<u8> {
    let mut key = Vec::new();
    for &p in comparison {
        let rem = p % 8;
        if !key.contains(&rem) {
            key.push(rem);
        }
        if key.len() == 8 {
            return key;
        }
    }
    for rem in 0..8 {
        if !key.contains(&rem) {
            key.push(rem);
        }
    }
    key
}

pub fn pad(comparison: &[u8], bit_len: usize) -> Vec<u8> {
    let mut l1 = Vec::new();
    for d in key(comparison) {
        for &p in comparison {
            l1.push((p >> d) & 1);
        }
    }
    while l1.len() < bit_len {
        l1.push(0);
    }
    l1.truncate(bit_len);
    l1
}

fn pixel_bits(pixels: &[u8]) -> Vec<u8> {
    let mut bits = Vec::new();
    for &p in pixels {
        for b in (0..8).rev() {
            bits.push((p >> b) & 1);
        }
    }
    bits
}

pub fn side_for(bit_len: usize) -> usize {
    let mut side = 0;
    while side * side < bit_len {
        side += 1;
    }
    side
}

/// Encodes up to eight equally sized secrets into `.msis` file bytes.
pub fn encode(secrets: &[Vec<u8>], width: usize, height: usize, comparison: &[u8]) -> Vec<u8> {
    let bit_len = 8 * width * height;
    let side = side_for(bit_len);
    let l1 = pad(comparison, bit_len);

    let mut grids = Vec::new();
    for i in 0..8 {
        let secret = secrets
            .get(i)
            .cloned()
            .unwrap_or_else(|| vec![0; width * height]);
        let l2 = pixel_bits(&secret);
        let l3: Vec<u8> = (0..bit_len).map(|k| l1[k] ^ l2[k]).collect();
        let mut grid = vec![vec![0u8; side]; side];
        for (k, &bit) in l3.iter().enumerate() {
            grid[k / side][k % side] = bit;
        }
        grids.push(grid);
    }

    let mut share = Vec::new();
    for r in 0..side {
        for c in 0..side {
            let mut value = 0u32;
            for (i, grid) in grids.iter().enumerate() {
                value += grid[r][c] as u32 * 2u32.pow(7 - i as u32);
            }
            share.push(value as u8);
        }
    }

    let mut out = Vec::new();
    out.extend_from_slice(b"MS18");
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&(width as u32).to_le_bytes());
    out.extend_from_slice(&(height as u32).to_le_bytes());
    out.push(secrets.len() as u8);
    out.extend_from_slice(&[0; 7]);
    out.extend_from_slice(&(bit_len as u64).to_le_bytes());
    out.extend_from_slice(&(side as u32).to_le_bytes());
    out.extend_from_slice(&share);
    out
}

/// Recovers all eight secrets from a share's pixels.
pub fn decode(share: &[u8], width: usize, height: usize, comparison: &[u8]) -> Vec<Vec<u8>> {
    let bit_len = 8 * width * height;
    let l1 = pad(comparison, bit_len);
    (0..8)
        .map(|i| {
            let l5: Vec<u8> = share
                .iter()
                .take(bit_len)
                .map(|&p| (p >> (7 - i)) & 1)
                .collect();
            let l6: Vec<u8> = l5.iter().zip(&l1).map(|(a, b)| a ^ b).collect();
            l6.chunks(8)
                .map(|byte| byte.iter().fold(0u8, |acc, &b| acc * 2 + b))
                .collect()
        })
        .collect()
}
