use super::set::{dist, DiscretizedSet, VectorArray};
use crate::error::{Error, Result};

/// Output of [`frust_find`]: a center `a` and two slices of `E` on which
/// `f` and `f′` stay within `(3/2)R` of it.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceWitness {
    pub x0_index: usize,
    pub x0p_index: usize,
    /// `(f(x₀) + f′(x₀′))/2`.
    pub a: Vec<f64>,
    /// `G = {x : (x, x₀′) ∈ E}`, a subset of the first factor.
    pub g: Vec<bool>,
    /// `G′ = {x′ : (x₀, x′) ∈ E}`, a subset of the second factor.
    pub g1: Vec<bool>,
    pub r_used: f64,
    /// Measure `r` of `E`.
    pub set_measure: f64,
}

impl SliceWitness {
    pub fn measure_g(&self) -> f64 {
        mask_measure(&self.g)
    }

    pub fn measure_g1(&self) -> f64 {
        mask_measure(&self.g1)
    }
}

pub(crate) fn mask_measure(mask: &[bool]) -> f64 {
    mask.iter().filter(|&&b| b).count() as f64 / mask.len() as f64
}

/// Outcome of re-checking a witness against its defining inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCheck {
    /// `max_{x∈G} |f(x) − a|`.
    pub max_dev_g: f64,
    /// `max_{x′∈G′} |f′(x′) − a|`.
    pub max_dev_g1: f64,
    pub measure_g: f64,
    pub measure_g1: f64,
    /// Both deviations are at most `(3/2)R`.
    pub deviations_ok: bool,
    /// Both slice measures are at least `r/4 − 1/n`.
    pub measures_ok: bool,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.deviations_ok && self.measures_ok
    }
}

fn check_inputs(e: &DiscretizedSet, f: &VectorArray, fp: &VectorArray) -> Result<()> {
    let n = e.n();
    if f.len() != n || fp.len() != n {
        return Err(Error::arg(format!("f and f′ must hold one vector per grid cell ({n})")));
    }
    if f.dim() != fp.dim() {
        return Err(Error::arg("f and f′ take values in spaces of different dimension"));
    }
    Ok(())
}

/// Finds `a` and slices `G ⊂ Ω`, `G′ ⊂ Ω′` of `E` with
/// `|f − a| ≤ (3/2)R` on `G`, `|f′ − a| ≤ (3/2)R` on `G′`, and both slices of
/// measure at least `r/4`, where `r` is the measure of `E`.
///
/// The hypothesis `|f(x) − f′(x′)| ≤ R` on `E` is checked cell by cell. The
/// base point `(x₀, x₀′)` is the lexicographically smallest cell of `E`
/// whose row and column slices both have measure at least `r/4`; the center
/// is `a = (f(x₀) + f′(x₀′))/2`.
pub fn frust_find(e: &DiscretizedSet, f: &VectorArray, fp: &VectorArray, r_bound: f64) -> Result<SliceWitness> {
    check_inputs(e, f, fp)?;
    if !(r_bound >= 0.0 && r_bound.is_finite()) {
        return Err(Error::arg("R must be finite and non-negative"));
    }
    let n = e.n();
    for i in 0..n {
        for j in 0..n {
            if e.contains(i, j) {
                let gap = dist(f.get(i), fp.get(j));
                if !(gap <= r_bound) {
                    return Err(Error::Precondition(format!(
                        "|f(x) − f′(x′)| = {gap} exceeds R = {r_bound} at cell ({i}, {j})"
                    )));
                }
            }
        }
    }
    let r = e.measure();
    if !(r > 4.0 / n as f64) {
        return Err(Error::Resolution(format!(
            "set measure {r} does not exceed 4/n = {} at resolution n = {n}",
            4.0 / n as f64
        )));
    }
    let (i0, j0) = first_good_cell(e)
        .ok_or_else(|| Error::Resolution(format!("no cell of E has both slices of measure ≥ r/4 at n = {n}")))?;
    let a: Vec<f64> = f.get(i0).iter().zip(fp.get(j0)).map(|(u, v)| 0.5 * (u + v)).collect();
    Ok(SliceWitness {
        x0_index: i0,
        x0p_index: j0,
        a,
        g: e.column(j0),
        g1: e.row(i0),
        r_used: r_bound,
        set_measure: r,
    })
}

/// Lexicographically smallest `(i, j) ∈ E` with row measure of `i` and
/// column measure of `j` both at least `r/4`.
///
/// Works on integer counts: `count/n ≥ (total/n²)/4` iff `4·n·count ≥ total`.
pub fn first_good_cell(e: &DiscretizedSet) -> Option<(usize, usize)> {
    let n = e.n();
    let total = e.count();
    let rows = e.row_counts();
    let cols = e.column_counts();
    let good = |count: usize| 4 * n * count >= total;
    let good_cols: Vec<bool> = cols.iter().map(|&c| good(c)).collect();
    (0..n)
        .filter(|&i| good(rows[i]))
        .find_map(|i| (0..n).find(|&j| good_cols[j] && e.contains(i, j)).map(|j| (i, j)))
}

/// Re-evaluates the witness inequalities at every grid cell of `G`, `G′`.
pub fn check_witness(e: &DiscretizedSet, f: &VectorArray, fp: &VectorArray, w: &SliceWitness) -> Result<WitnessCheck> {
    check_inputs(e, f, fp)?;
    let max_dev = |vals: &VectorArray, mask: &[bool]| {
        mask.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| dist(vals.get(i), &w.a))
            .fold(0.0, f64::max)
    };
    let max_dev_g = max_dev(f, &w.g);
    let max_dev_g1 = max_dev(fp, &w.g1);
    let limit = 1.5 * w.r_used;
    let floor = w.set_measure / 4.0 - 1.0 / e.n() as f64;
    let (measure_g, measure_g1) = (w.measure_g(), w.measure_g1());
    Ok(WitnessCheck {
        max_dev_g,
        max_dev_g1,
        measure_g,
        measure_g1,
        deviations_ok: max_dev_g <= limit && max_dev_g1 <= limit,
        measures_ok: measure_g >= floor && measure_g1 >= floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_zero_functions() {
        let e = DiscretizedSet::full(16);
        let z = VectorArray::scalar(vec![0.0; 16]);
        let w = frust_find(&e, &z, &z, 0.0).unwrap();
        assert_eq!((w.x0_index, w.x0p_index), (0, 0));
        assert_eq!(w.a, vec![0.0]);
        assert!(w.g.iter().all(|&b| b) && w.g1.iter().all(|&b| b));
    }

    #[test]
    fn quarter_square() {
        let n = 256;
        let e = DiscretizedSet::from_fn(n, |x, y| x < 0.5 && y < 0.5);
        let f = VectorArray::from_fn(n, 1, |x| vec![x]).unwrap();
        let w = frust_find(&e, &f, &f, 0.5).unwrap();
        assert_eq!(w.measure_g(), 0.5);
        assert_eq!(w.measure_g1(), 0.5);
        let c = check_witness(&e, &f, &f, &w).unwrap();
        assert!(c.passed());
        assert!(c.max_dev_g <= 0.75);
    }

    #[test]
    fn hypothesis_violation_names_cell() {
        let e = DiscretizedSet::full(8);
        let f = VectorArray::from_fn(8, 1, |x| vec![x]).unwrap();
        let z = VectorArray::scalar(vec![0.0; 8]);
        match frust_find(&e, &f, &z, 0.5) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("cell (4, 0)"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tiny_sets_are_a_resolution_error() {
        let e = DiscretizedSet::from_fn(8, |x, y| x < 0.125 && y < 0.25);
        let z = VectorArray::scalar(vec![0.0; 8]);
        assert!(matches!(frust_find(&e, &z, &z, 1.0), Err(Error::Resolution(_))));
    }
}
