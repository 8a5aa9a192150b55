//! SDPA sparse format export.

use std::io::Write;

use super::SdpProblem;
use crate::error::Result;

/// Writes `prob` in SDPA sparse format.
///
/// SDPA's primal is `min c^T x s.t. sum x_i F_i - F_0 >= 0`, so the constant
/// matrices are written with flipped sign. Equality constraints become a
/// diagonal LP block holding `a^T x - b` and `b - a^T x`.
pub fn write_sdpa<W: Write>(prob: &SdpProblem, mut out: W) -> Result<()> {
    let m = prob.num_vars();
    let mut sizes: Vec<i64> = prob.blocks().iter().map(|b| b.size() as i64).collect();
    let k = prob.equalities().len();
    if k > 0 {
        sizes.push(-2 * k as i64);
    }
    writeln!(out, "{m} = mDIM")?;
    writeln!(out, "{} = nBLOCK", sizes.len())?;
    let sizes_str: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
    writeln!(out, "{} = bLOCKsTRUCT", sizes_str.join(" "))?;
    let cost: Vec<String> = prob.cost().iter().map(|c| format!("{c:e}")).collect();
    writeln!(out, "{}", cost.join(" "))?;
    for (j, b) in prob.blocks().iter().enumerate() {
        for e in b.entries() {
            let (matno, v) = match e.var {
                None => (0, -e.value),
                Some(i) => (i + 1, e.value),
            };
            writeln!(out, "{matno} {} {} {} {v:e}", j + 1, e.row + 1, e.col + 1)?;
        }
    }
    if k > 0 {
        let blk = prob.blocks().len() + 1;
        for (r, eq) in prob.equalities().iter().enumerate() {
            let (d1, d2) = (2 * r + 1, 2 * r + 2);
            if eq.rhs != 0.0 {
                writeln!(out, "0 {blk} {d1} {d1} {:e}", eq.rhs)?;
                writeln!(out, "0 {blk} {d2} {d2} {:e}", -eq.rhs)?;
            }
            for &(v, a) in &eq.coeffs {
                writeln!(out, "{} {blk} {d1} {d1} {a:e}", v + 1)?;
                writeln!(out, "{} {blk} {d2} {d2} {:e}", v + 1, -a)?;
            }
        }
    }
    Ok(())
}
