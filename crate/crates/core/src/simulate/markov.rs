use super::process::{MeasurementProcess, Outcome, OutcomeString};
use crate::error::{Error, Result};

/// Row sums must equal 1 within this.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Row-stochastic transition matrix `P[i][j]` = probability of `j` following `i`.
pub type Transition = [[f64; 2]; 2];

fn validate(p: &Transition) -> Result<()> {
    for (i, row) in p.iter().enumerate() {
        if row.iter().any(|x| !x.is_finite() || *x < -STOCHASTIC_TOL || *x > 1.0 + STOCHASTIC_TOL) {
            return Err(Error::InvalidInput(format!("transition row {i} has entries outside [0, 1]")));
        }
        let sum = row[0] + row[1];
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidInput(format!("transition row {i} sums to {sum}")));
        }
    }
    Ok(())
}

/// `p_{0 i_1} ∏ p_{i_m i_{m+1}}` for a chain started in state 0.
pub fn markov_string_probability(p: &Transition, s: &OutcomeString) -> Result<f64> {
    validate(p)?;
    let mut prev = Outcome::Zero;
    let mut prob = 1.0;
    for &o in s.symbols() {
        prob *= p[prev.index()][o.index()];
        prev = o;
    }
    Ok(prob)
}

/// The symmetric chain `[[p, 1−p], [1−p, p]]` of a two-level process, `p = |⟨z|Uz⟩|²`.
pub fn qubit_transition_matrix(process: &MeasurementProcess) -> Result<Transition> {
    if process.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "the two-state chain needs a two-level process, got d = {}",
            process.dim()
        )));
    }
    let stay = process.string_probability(&OutcomeString::ones_then(0, true));
    let p = stay.clamp(0.0, 1.0);
    Ok([[p, 1.0 - p], [1.0 - p, p]])
}

/// Transition matrix matching the process on all strings of length ≤ 2.
/// Exact for `d = 2`; for larger `d` the mismatch on longer strings shows the memory.
pub fn fitted_transition(process: &MeasurementProcess) -> Result<Transition> {
    let p0 = process.string_probability(&"0".parse()?);
    let p1 = process.string_probability(&"1".parse()?);
    let row1 = if p1 > 0.0 {
        let p10 = process.string_probability(&"10".parse()?) / p1;
        let p11 = process.string_probability(&"11".parse()?) / p1;
        let total = p10 + p11;
        [p10 / total, p11 / total]
    } else {
        // state 1 is never reached; any row works
        [1.0, 0.0]
    };
    let total = p0 + p1;
    Ok([[p0 / total, p1 / total], row1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::qubit_rotation_for;

    #[test]
    fn uniform_chain() {
        let p = [[0.5, 0.5], [0.5, 0.5]];
        assert_eq!(markov_string_probability(&p, &"101".parse().unwrap()).unwrap(), 0.125);
    }

    #[test]
    fn absorbing_start() {
        let p = [[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(markov_string_probability(&p, &"0".parse().unwrap()).unwrap(), 1.0);
        assert_eq!(markov_string_probability(&p, &"01".parse().unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn rejects_non_stochastic() {
        assert!(markov_string_probability(&[[0.5, 0.6], [0.5, 0.5]], &"0".parse().unwrap()).is_err());
        assert!(markov_string_probability(&[[1.5, -0.5], [0.5, 0.5]], &"0".parse().unwrap()).is_err());
    }

    #[test]
    fn qubit_chain_matches_wigner() {
        for p in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let (u, z) = qubit_rotation_for(p).unwrap();
            let q = MeasurementProcess::new(u, z).unwrap();
            let t = qubit_transition_matrix(&q).unwrap();
            assert!((t[0][0] - p).abs() < 1e-14);
            for len in 1..=8 {
                for s in OutcomeString::all_of_length(len) {
                    let w = q.string_probability(&s);
                    let m = markov_string_probability(&t, &s).unwrap();
                    assert!((w - m).abs() < 1e-12, "p = {p}, s = {s}: {w} vs {m}");
                }
            }
        }
    }

    #[test]
    fn fitted_equals_symmetric_chain_for_qubits() {
        let (u, z) = qubit_rotation_for(0.3).unwrap();
        let q = MeasurementProcess::new(u, z).unwrap();
        let a = fitted_transition(&q).unwrap();
        let b = qubit_transition_matrix(&q).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((a[i][j] - b[i][j]).abs() < 1e-12);
            }
        }
    }
}
