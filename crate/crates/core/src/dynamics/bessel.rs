/// Bessel functions `J_0(z) ..= J_kmax(z)` for `z >= 0` by Miller's backward
/// recurrence, normalized with `J_0 + 2 Σ J_2k = 1`.
pub fn bessel_j_sequence(z: f64, kmax: usize) -> Vec<f64> {
    assert!(
        z >= 0.0 && z.is_finite(),
        "Bessel argument must be finite and non-negative"
    );
    let mut out = vec![0.0; kmax + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let top = kmax.max(z.ceil() as usize);
    // start well above both kmax and z; even so the normalization sum pairs up
    let mut start = top + 20 + ((40 * top) as f64).sqrt() as usize;
    start += start % 2;

    let two_over_z = 2.0 / z;
    let mut j_next = 0.0;
    let mut j_cur = 1e-300;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let j_prev = k as f64 * two_over_z * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        // j_cur now holds J_{k-1}
        if (k - 1) <= kmax {
            out[k - 1] = j_cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j_cur;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            out.iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    norm += j_cur;
    out.iter_mut().for_each(|v| *v /= norm);
    out
}
