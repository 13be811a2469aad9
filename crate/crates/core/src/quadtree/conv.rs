use crate::error::{invalid, Result};

/// Exact integer convolution `c[k] = Σ v[i] w[k - i]` of two equal-length
/// 0/1 vectors; the result has length `2 len - 1`.
pub fn convolve(v: &[u8], w: &[u8]) -> Result<Vec<u32>> {
    if v.len() != w.len() {
        return Err(invalid(format!("convolution of lengths {} and {}", v.len(), w.len())));
    }
    if v.is_empty() {
        return Ok(Vec::new());
    }
    let ones_w: Vec<usize> = (0..w.len()).filter(|&k| w[k] != 0).collect();
    let mut c = vec![0u32; 2 * v.len() - 1];
    for (i, &x) in v.iter().enumerate() {
        if x != 0 {
            for &k in &ones_w {
                c[i + k] += 1;
            }
        }
    }
    Ok(c)
}

/// Convolution of two vectors of length `len` given by their (local) one positions.
pub fn convolve_sparse(ones_v: &[usize], ones_w: &[usize], len: usize) -> Vec<u32> {
    let mut c = vec![0u32; (2 * len).saturating_sub(1)];
    for &i in ones_v {
        for &k in ones_w {
            c[i + k] += 1;
        }
    }
    c
}
