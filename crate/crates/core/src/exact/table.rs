use num_bigint::BigUint;

use crate::count::{pascal_triangle, Count};

/// Index triple `(r, s, k)` into a [`DefectTable`]: `r` spaces left empty,
/// `s` spaces occupied, `k` drivers sent home.
///
/// Signed so that the recurrence can address `r - 1` or `s - 1` directly;
/// any negative component denotes the value zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TableParams {
    pub r: i64,
    pub s: i64,
    pub k: i64,
}

impl TableParams {
    pub fn new(r: i64, s: i64, k: i64) -> Self {
        TableParams { r, s, k }
    }
}

/// Memoized values `a(r, s, k)`: the number of preference sequences of
/// `s + k` drivers on `r + s` spaces that leave `r` spaces empty, fill `s`
/// and send `k` drivers home.
///
/// Filled by the last-space recurrence
///
/// ```text
/// a(r,s,k) = [r=s=k=0] + [k=0]·a(r-1,s,0) + Σ_{i=0}^{k+1} C(s+k, k+1-i)·a(r,s-1,i)
/// ```
///
/// The binomial ranges over all `s + k` arriving drivers: it picks the
/// `k + 1 - i` of them that chose the last space outright.
///
/// Layers are stored for increasing `s`. Layer `s` keeps `k` up to
/// `k_max + (s_max - s)` because layer `s + 1` reads `a(r, s, k + 1)`.
/// A finished table is immutable and can be shared across threads.
#[derive(Clone, Debug)]
pub struct DefectTable {
    r_max: usize,
    s_max: usize,
    k_max: usize,
    /// `layers[s][r * width(s) + k]`
    layers: Vec<Vec<Count>>,
}

impl DefectTable {
    pub fn build(r_max: usize, s_max: usize, k_max: usize) -> Self {
        let binom = pascal_triangle(s_max + k_max);
        let mut layers: Vec<Vec<Count>> = Vec::with_capacity(s_max + 1);

        for s in 0..=s_max {
            let width = k_max + (s_max - s) + 1;
            let mut layer = vec![Count::ZERO; (r_max + 1) * width];
            for r in 0..=r_max {
                for k in 0..width {
                    let mut value = BigUint::ZERO;
                    if r == 0 && s == 0 && k == 0 {
                        value += 1u8;
                    }
                    if k == 0 && r > 0 {
                        value += layer[(r - 1) * width].as_biguint();
                    }
                    if s > 0 {
                        let below = &layers[s - 1];
                        let below_width = width + 1;
                        let row = &binom[s + k];
                        for i in 0..=k + 1 {
                            let a = below[r * below_width + i].as_biguint();
                            if a.bits() != 0 {
                                value += &row[k + 1 - i] * a;
                            }
                        }
                    }
                    layer[r * width + k] = Count::new(value);
                }
            }
            layers.push(layer);
        }

        DefectTable {
            r_max,
            s_max,
            k_max,
            layers,
        }
    }

    /// Table sized for every `cp(n', m', k')` with `n' <= n_max`, `m' <= m_max`.
    pub fn for_parking(n_max: usize, m_max: usize) -> Self {
        DefectTable::build(n_max, m_max, m_max)
    }

    pub fn bounds(&self) -> (usize, usize, usize) {
        (self.r_max, self.s_max, self.k_max)
    }

    /// `a(r, s, k)`; zero for any negative index, `None` past the table bounds.
    pub fn get(&self, p: TableParams) -> Option<&Count> {
        if p.r < 0 || p.s < 0 || p.k < 0 {
            return Some(&Count::ZERO);
        }
        let (r, s, k) = (p.r as usize, p.s as usize, p.k as usize);
        if r > self.r_max || s > self.s_max || k > self.k_max {
            return None;
        }
        let width = self.k_max + (self.s_max - s) + 1;
        self.layers[s].get(r * width + k)
    }

    /// `cp(n, m, k) = a(n - m + k, m - k, k)`, or `None` past the table bounds.
    pub fn defect_count(&self, n: u32, m: u32, k: u32) -> Option<&Count> {
        let (n, m, k) = (i64::from(n), i64::from(m), i64::from(k));
        self.get(TableParams::new(n - m + k, m - k, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(t: &DefectTable, r: i64, s: i64, k: i64) -> Count {
        t.get(TableParams::new(r, s, k)).unwrap().clone()
    }

    #[test]
    fn base_case() {
        let t = DefectTable::build(0, 0, 0);
        assert_eq!(a(&t, 0, 0, 0), Count::one());
    }

    #[test]
    fn zero_defect_slice_matches_closed_form() {
        let t = DefectTable::build(10, 10, 0);
        assert_eq!(a(&t, 1, 2, 0), Count::from(8));
        for r in 0..=10u64 {
            for s in 0..=10u32 {
                // (r+1)(r+s+1)^(s-1), written to avoid the s = 0 negative exponent
                let expected = if s == 0 {
                    Count::one()
                } else {
                    &Count::from(r + 1) * &Count::pow(r + s as u64 + 1, s - 1)
                };
                assert_eq!(a(&t, r as i64, s as i64, 0), expected, "r={r} s={s}");
            }
        }
    }

    #[test]
    fn negative_indices_are_zero_and_out_of_bounds_is_none() {
        let t = DefectTable::build(2, 2, 2);
        assert_eq!(a(&t, -1, 0, 0), Count::ZERO);
        assert_eq!(a(&t, 0, -3, 1), Count::ZERO);
        assert_eq!(a(&t, 1, 1, -1), Count::ZERO);
        assert!(t.get(TableParams::new(3, 0, 0)).is_none());
        assert!(t.get(TableParams::new(0, 0, 3)).is_none());
    }

    #[test]
    fn small_table_rows() {
        let t = DefectTable::for_parking(4, 4);
        let row: Vec<Count> = (0..=4)
            .map(|k| t.defect_count(4, 4, k).unwrap().clone())
            .collect();
        assert_eq!(row, [125u64, 107, 23, 1, 0].map(Count::from).to_vec());
        assert_eq!(t.defect_count(2, 3, 1).unwrap(), &Count::from(7));
        // more lost drivers than arrived
        assert_eq!(t.defect_count(3, 2, 3).unwrap(), &Count::ZERO);
    }

    #[test]
    fn every_entry_satisfies_the_recurrence() {
        let (r_max, s_max, k_max) = (4usize, 5usize, 3usize);
        let t = DefectTable::build(r_max, s_max, k_max);
        let binom = pascal_triangle(20);
        // layer s-1 is read at k+1, which may exceed k_max
        let wide = DefectTable::build(r_max, s_max, k_max + 2);
        for s in 1..=s_max as i64 {
            for r in 0..=r_max as i64 {
                for k in 0..=k_max as i64 {
                    let mut want = Count::ZERO;
                    if k == 0 {
                        want += &a(&t, r - 1, s, 0);
                    }
                    for i in 0..=k + 1 {
                        let c = Count::new(binom[(s + k) as usize][(k + 1 - i) as usize].clone());
                        want += &(&c * &a(&wide, r, s - 1, i));
                    }
                    assert_eq!(a(&t, r, s, k), want, "a({r},{s},{k})");
                }
            }
        }
    }
}
