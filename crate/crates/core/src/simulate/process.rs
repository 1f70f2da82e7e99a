use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CVector, UnitaryMatrix, C64};
use crate::witness::{sum_series, Projector, TruncationReason};

/// Repeated yes-no measurement of `{|z⟩⟨z|, I − |z⟩⟨z|}` with evolution `U` between
/// measurements, started in `z`. Outcome 0 means "found in `z`".
#[derive(Debug, Clone)]
pub struct MeasurementProcess {
    u: UnitaryMatrix,
    z: CVector,
    projector: Projector,
}

impl MeasurementProcess {
    pub fn new(u: UnitaryMatrix, z: CVector) -> Result<Self> {
        if u.dim() != z.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                actual: z.dim(),
            });
        }
        let projector = Projector::new(&z)?;
        let z = CVector::new(projector.z().clone())?;
        Ok(MeasurementProcess { u, z, projector })
    }

    /// Process with `z = e_1`.
    pub fn from_first_basis(u: UnitaryMatrix) -> Result<Self> {
        let z = CVector::basis(u.dim(), 0)?;
        Self::new(u, z)
    }

    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.u
    }

    pub fn z(&self) -> &CVector {
        &self.z
    }

    pub fn projector(&self) -> &Projector {
        &self.projector
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// Applies `U` then the projection belonging to `outcome`, in place (unnormalized).
    pub(crate) fn step(&self, psi: &mut DVector<C64>, outcome: Outcome) {
        *psi = self.u.matrix() * &*psi;
        let overlap = self.z.dotc(psi);
        match outcome {
            Outcome::One => psi.axpy(-overlap, &self.z, C64::new(1.0, 0.0)),
            Outcome::Zero => *psi = &*self.z * overlap,
        }
    }

    /// Wigner formula: `‖P_{i_n} U ⋯ P_{i_1} U z‖²` with `P_1 = P`, `P_0 = I − P`.
    pub fn string_probability(&self, s: &OutcomeString) -> f64 {
        let mut psi = (*self.z).clone();
        for &o in s.symbols() {
            self.step(&mut psi, o);
        }
        psi.norm_squared()
    }

    /// `a_n`, the probability of `n` consecutive ones (`a_0 = 1`).
    pub fn all_ones_probability(&self, n: usize) -> f64 {
        if n == 0 {
            return 1.0;
        }
        self.string_probability(&OutcomeString::ones_then(n, false))
    }

    /// `b_n`, the probability that the first zero arrives at measurement `n + 1`.
    /// Equal to `a_n − a_{n+1}`, evaluated directly so it is never negative.
    pub fn first_return_probability(&self, n: usize) -> f64 {
        self.string_probability(&OutcomeString::ones_then(n, true))
    }

    /// Mean return time to `z` as `Σ a_n`, with the geometric tail bound.
    pub fn mean_return_time_series(&self, tail_tol: f64, max_steps: usize) -> Result<MeanReturnTime> {
        let series = sum_series(&self.u, &self.z, tail_tol, max_steps)?;
        Ok(MeanReturnTime {
            value: series.sum,
            terms: series.terms,
            truncation_reason: series.truncation_reason,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanReturnTime {
    pub value: f64,
    pub terms: usize,
    pub truncation_reason: TruncationReason,
}

/// Analytic mean return time of the two-state symmetric chain with stay probability `p`:
/// `p + (1−p)² Σ n p^{n−1} + (1−p)² Σ p^{n−1}`, which is 2 for `p < 1` and 1 for `p = 1`.
pub fn qubit_mean_return_time(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("probability out of range: {p}")));
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    // (1−p)²·(1−p)^{−2} + (1−p)²·(1−p)^{−1} + p = 1 + (1 − p) + p
    Ok(2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Zero,
    One,
}

impl Outcome {
    pub fn as_char(self) -> char {
        match self {
            Outcome::Zero => '0',
            Outcome::One => '1',
        }
    }

    pub fn index(self) -> usize {
        match self {
            Outcome::Zero => 0,
            Outcome::One => 1,
        }
    }
}

/// A finite sequence of measurement outcomes, written as ASCII `0`/`1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OutcomeString {
    symbols: Vec<Outcome>,
}

impl OutcomeString {
    pub fn new(symbols: Vec<Outcome>) -> Self {
        OutcomeString { symbols }
    }

    /// `n` ones, optionally followed by a single zero.
    pub fn ones_then(n: usize, zero: bool) -> Self {
        let mut symbols = vec![Outcome::One; n];
        if zero {
            symbols.push(Outcome::Zero);
        }
        OutcomeString { symbols }
    }

    /// The `index`-th string of length `len` in lexicographic order (bit `len−1−k` of
    /// `index` gives symbol `k`).
    pub fn from_bits(index: u64, len: usize) -> Self {
        let symbols = (0..len)
            .map(|k| {
                if (index >> (len - 1 - k)) & 1 == 1 {
                    Outcome::One
                } else {
                    Outcome::Zero
                }
            })
            .collect();
        OutcomeString { symbols }
    }

    /// All `2^len` strings of the given length.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = OutcomeString> {
        (0..1u64 << len).map(move |i| OutcomeString::from_bits(i, len))
    }

    pub fn symbols(&self) -> &[Outcome] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn push(&mut self, o: Outcome) {
        self.symbols.push(o);
    }

    pub fn count(&self, o: Outcome) -> usize {
        self.symbols.iter().filter(|&&x| x == o).count()
    }
}

impl fmt::Display for OutcomeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.symbols {
            write!(f, "{}", o.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for OutcomeString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Outcome::Zero),
                '1' => Ok(Outcome::One),
                other => Err(Error::InvalidInput(format!("outcome symbol {other:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(OutcomeString::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{haar_unitary, SeedStream};
    use crate::witness::qubit_rotation_for;

    fn qubit(p: f64) -> MeasurementProcess {
        let (u, z) = qubit_rotation_for(p).unwrap();
        MeasurementProcess::new(u, z).unwrap()
    }

    fn s(text: &str) -> OutcomeString {
        text.parse().unwrap()
    }

    #[test]
    fn qubit_string_probabilities() {
        let p = 0.3;
        let q = qubit(p);
        assert!((q.string_probability(&s("1")) - (1.0 - p)).abs() < 1e-15);
        assert!((q.string_probability(&s("11")) - (1.0 - p) * p).abs() < 1e-15);
        assert!((q.string_probability(&s("10")) - (1.0 - p).powi(2)).abs() < 1e-15);
        assert!((q.string_probability(&s("0")) - p).abs() < 1e-15);
    }

    #[test]
    fn first_return_closed_form() {
        let p = 0.6;
        let q = qubit(p);
        assert!((q.first_return_probability(0) - p).abs() < 1e-15);
        for n in 1..10 {
            let expect = (1.0 - p).powi(2) * p.powi(n as i32 - 1);
            assert!((q.first_return_probability(n) - expect).abs() < 1e-14);
            let diff = q.all_ones_probability(n) - q.all_ones_probability(n + 1);
            assert!((q.first_return_probability(n) - diff).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_returns_immediately() {
        let q = MeasurementProcess::from_first_basis(UnitaryMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(q.all_ones_probability(1), 0.0);
        assert_eq!(q.first_return_probability(0), 1.0);
        assert_eq!(q.all_ones_probability(0), 1.0);
    }

    #[test]
    fn total_probability_is_one() {
        let u = haar_unitary(4, &SeedStream::new(8, 0)).unwrap();
        let q = MeasurementProcess::from_first_basis(u).unwrap();
        for len in 1..=8 {
            let total: f64 = OutcomeString::all_of_length(len).map(|x| q.string_probability(&x)).sum();
            assert!((total - 1.0).abs() < 1e-10, "len {len}: {total}");
        }
    }

    #[test]
    fn mean_return_time_qubit() {
        assert_eq!(qubit_mean_return_time(0.4).unwrap(), 2.0);
        assert_eq!(qubit_mean_return_time(1.0).unwrap(), 1.0);
        assert!(qubit_mean_return_time(-0.1).is_err());
        let m = qubit(0.4).mean_return_time_series(1e-10, 100_000).unwrap();
        assert!((m.value - 2.0).abs() < 1e-8);
        assert_eq!(m.truncation_reason, TruncationReason::TailBoundMet);
        let m1 = qubit(1.0).mean_return_time_series(1e-10, 100).unwrap();
        assert_eq!(m1.value, 1.0);
    }

    #[test]
    fn haar_mean_return_time_equals_dimension() {
        let u = haar_unitary(5, &SeedStream::new(9, 0)).unwrap();
        let m = MeasurementProcess::from_first_basis(u).unwrap().mean_return_time_series(1e-8, 1_000_000).unwrap();
        assert!((m.value - 5.0).abs() < 1e-6);
    }

    #[test]
    fn outcome_string_text_round_trip() {
        let x = s("0110");
        assert_eq!(x.to_string(), "0110");
        assert_eq!(OutcomeString::from_bits(0b0110, 4), x);
        assert!("012".parse::<OutcomeString>().is_err());
        assert_eq!(OutcomeString::all_of_length(3).count(), 8);
    }
}
