use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::privacy::PrivacyBudget;
use rand::Rng;
use rand_distr::{Distribution, Geometric};

/// Outcome of [`ps_select`].
#[derive(Debug, Clone, PartialEq)]
pub struct Selection<T> {
    pub best: T,
    pub best_quality: f64,
    pub best_index: usize,
    pub copies: usize,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(invalid("gamma", format!("{gamma} is outside (0, 1)")))
    }
}

/// `J ~ Geometric(γ)` on `{1, 2, …}`.
pub fn draw_copies<R: Rng + ?Sized>(rng: &mut R, gamma: f64) -> Result<usize> {
    check_gamma(gamma)?;
    let failures = Geometric::new(gamma).expect("gamma checked").sample(rng);
    Ok(usize::try_from(failures).unwrap_or(usize::MAX - 1) + 1)
}

/// Run `J ~ Geometric(γ)` independent copies of a mechanism returning
/// `(output, quality)` and keep the highest quality (first on ties).
pub fn ps_select<T, F, R>(rng: &mut R, gamma: f64, exec: Execution, copy: F) -> Result<Selection<T>>
where
    T: Send,
    R: Rng + ?Sized,
    F: Fn(usize) -> Result<(T, f64)> + Sync + Send,
{
    let copies = draw_copies(rng, gamma)?;
    let outs = exec.try_map(copies, copy)?;
    let best_index = super::core::argmax_by(&outs, |o| o.1);
    let (best, best_quality) = outs.into_iter().nth(best_index).expect("at least one copy");
    Ok(Selection {
        best,
        best_quality,
        best_index,
        copies,
    })
}

/// `6 sqrt(ρ ln(1/(γδ)))`: ε of the selection wrapper around ρ-zCDP copies.
pub fn ps_select_epsilon(per_copy: PrivacyBudget, gamma: f64, delta: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("{delta} is outside (0, 1)")));
    }
    Ok(6.0 * (per_copy.zcdp() * (1.0 / (gamma * delta)).ln()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamKey;

    #[test]
    fn mean_copies_at_one_half() {
        let mut rng = StreamKey::root(8).stream();
        let draws: Vec<usize> = (0..10_000)
            .map(|_| draw_copies(&mut rng, 0.5).unwrap())
            .collect();
        assert!(draws.iter().all(|&j| j >= 1));
        let mean = draws.iter().sum::<usize>() as f64 / 1e4;
        assert!((mean - 2.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn single_copy_is_returned_verbatim() {
        // Find a seed whose first draw is J = 1.
        let seed = (0..)
            .find(|&s| draw_copies(&mut StreamKey::root(s).stream(), 0.9).unwrap() == 1)
            .unwrap();
        let sel = ps_select(
            &mut StreamKey::root(seed).stream(),
            0.9,
            Execution::Sequential,
            |i| Ok((i * 10, -3.0)),
        )
        .unwrap();
        assert_eq!((sel.copies, sel.best, sel.best_quality), (1, 0, -3.0));
    }

    #[test]
    fn picks_best_quality() {
        let sel = ps_select(
            &mut StreamKey::root(1).stream(),
            0.01,
            Execution::Parallel,
            |i| Ok((i, -((i as f64) - 7.0).powi(2))),
        )
        .unwrap();
        if sel.copies > 7 {
            assert_eq!(sel.best, 7);
        }
        assert!(ps_select(
            &mut StreamKey::root(1).stream(),
            1.0,
            Execution::Sequential,
            |i| Ok((i, 0.0))
        )
        .is_err());
    }

    #[test]
    fn selection_epsilon_matches_centralized_calibration() {
        let (eps, delta, n) = (1.0, 1e-6, 1024usize);
        let s = crate::privacy::sigma_for_target(
            eps,
            delta,
            n,
            crate::privacy::SigmaVariant::Centralized { c: 1.0 },
        )
        .unwrap();
        let rho = PrivacyBudget::new(1.0 / (s * s)).unwrap();
        let e = ps_select_epsilon(rho, 1.0 / n as f64, delta).unwrap();
        assert!((e - eps).abs() < 1e-12);
    }
}
