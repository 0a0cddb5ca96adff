/// Solves `<a, x> = b (mod 2)` for every equation `(x, b)`, treating each
/// `x` as a `d`-bit vector. Returns the parameter `a` with all free
/// variables set to 0, or `None` when the system is inconsistent.
pub fn gf2_solve(d: u32, equations: &[(u32, bool)]) -> Option<u32> {
    assert!(d <= 32, "dimension {d} exceeds 32 bits");
    let mask = if d == 32 { u32::MAX } else { (1u32 << d) - 1 };
    let mut rows: Vec<(u32, bool)> = equations.iter().map(|&(x, b)| (x & mask, b)).collect();
    let mut pivots: Vec<(u32, usize)> = Vec::new();
    let mut next = 0;
    for bit in (0..d).rev() {
        let col = 1u32 << bit;
        let Some(p) = (next..rows.len()).find(|&r| rows[r].0 & col != 0) else { continue };
        rows.swap(next, p);
        let pivot = rows[next];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.0 & col != 0 {
                row.0 ^= pivot.0;
                row.1 ^= pivot.1;
            }
        }
        pivots.push((col, next));
        next += 1;
    }
    if rows[next..].iter().any(|&(_, b)| b) {
        return None;
    }
    // reduced rows carry only their pivot and free columns
    Some(pivots.iter().filter(|&&(_, r)| rows[r].1).fold(0, |a, &(col, _)| a | col))
}
