//! Gaussian states on the four-dimensional phase space, moved by numerically
//! evaluated canonical maps.
//!
//! Covariances are symmetrized: `Sigma_ij = <{v_i - mu_i, v_j - mu_j}>/2`.
//! A map with rows `v_src = L v_tgt + a` carries a state forward by the
//! inverse moment transform; [`evolve`] applies `L` directly.

use nalgebra::{Matrix4, Matrix5, SMatrix, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::{adjoint_matrix, CanonicalMap};
use crate::error::{Error, Result};
use crate::expr::Parser;
use crate::linalg::Matrix;
use crate::qrf::{sd_composed, Particle, QrfWord};
use crate::scalar::{Bindings, NumBindings, Scalar, Symbol};
use crate::weyl::{PhaseVariable, WeylPoly};

/// Default position variance of a localized state.
pub const DELTA_WIDTH: f64 = 1e-4;
/// Tolerance on the numeric symplectic defect of a compiled map.
pub const DEFECT_TOLERANCE: f64 = 1e-9;

/// Numeric weighted form `blockdiag(kappa J, hbar J)`.
pub fn omega(bindings: &NumBindings) -> Result<Matrix4<f64>> {
    let get = |s: Symbol| {
        bindings
            .get(&s)
            .copied()
            .ok_or_else(|| Error::UnboundSymbol(s.to_string()))
    };
    let (k, h) = (get(Symbol::Kappa)?, get(Symbol::Hbar)?);
    let mut w = Matrix4::zeros();
    w[(0, 1)] = k;
    w[(1, 0)] = -k;
    w[(2, 3)] = h;
    w[(3, 2)] = -h;
    Ok(w)
}

/// Entrywise numeric value of a symbolic matrix.
pub fn numeric_matrix<const R: usize, const C: usize>(
    m: &Matrix,
    bindings: &NumBindings,
) -> Result<SMatrix<f64, R, C>> {
    assert_eq!((m.rows(), m.cols()), (R, C), "matrix shape");
    let mut out = SMatrix::<f64, R, C>::zeros();
    for r in 0..R {
        for c in 0..C {
            out[(r, c)] = m[(r, c)].eval_real(bindings)?;
        }
    }
    Ok(out)
}

/// Canonical map with every symbol replaced by a number.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericCanonicalMap {
    pub m: Matrix5<f64>,
    /// Largest entry of `L W L^T - W`.
    pub defect: f64,
}

impl NumericCanonicalMap {
    pub fn identity() -> Self {
        NumericCanonicalMap {
            m: Matrix5::identity(),
            defect: 0.0,
        }
    }

    pub fn linear(&self) -> Matrix4<f64> {
        self.m.fixed_view::<4, 4>(0, 0).into_owned()
    }

    pub fn affine(&self) -> Vector4<f64> {
        self.m.fixed_view::<4, 1>(0, 4).into_owned()
    }

    pub fn inverse(&self) -> Result<NumericCanonicalMap> {
        Ok(NumericCanonicalMap {
            m: self.m.try_inverse().ok_or(Error::DivisionByZero)?,
            defect: self.defect,
        })
    }
}

/// Evaluates a canonical map. Fails when the numeric symplectic defect
/// exceeds [`DEFECT_TOLERANCE`].
pub fn numeric_compile(map: &CanonicalMap, bindings: &NumBindings) -> Result<NumericCanonicalMap> {
    let m: Matrix5<f64> = numeric_matrix(map.matrix(), bindings)?;
    let l = m.fixed_view::<4, 4>(0, 0).into_owned();
    let w = omega(bindings)?;
    let defect = (l * w * l.transpose() - w).amax();
    if defect > DEFECT_TOLERANCE {
        return Err(Error::SymplecticDefect(defect));
    }
    Ok(NumericCanonicalMap { m, defect })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    pub mean: Vector4<f64>,
    pub cov: Matrix4<f64>,
}

impl GaussianState {
    pub fn new(mean: Vector4<f64>, cov: Matrix4<f64>) -> Result<Self> {
        if (cov - cov.transpose()).amax() > 1e-12 * (1.0 + cov.amax()) {
            return Err(Error::Invalid("covariance is not symmetric".into()));
        }
        Ok(GaussianState { mean, cov })
    }

    /// Localized state at the given positions and momenta: position variance
    /// `width`, momentum variance at the uncertainty bound for each pair.
    pub fn localized(mean: [f64; 4], width: f64, bindings: &NumBindings) -> Result<Self> {
        let w = omega(bindings)?;
        let (k, h) = (w[(0, 1)], w[(2, 3)]);
        let cov = Matrix4::from_diagonal(&Vector4::new(
            width,
            k * k / (4.0 * width),
            width,
            h * h / (4.0 * width),
        ));
        GaussianState::new(Vector4::from(mean), cov)
    }

    /// `Sigma + (i/2) W >= 0`, tested on the real 8x8 embedding.
    pub fn is_physical(&self, bindings: &NumBindings) -> Result<bool> {
        let w = omega(bindings)? * 0.5;
        let mut big = SMatrix::<f64, 8, 8>::zeros();
        big.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.cov);
        big.fixed_view_mut::<4, 4>(4, 4).copy_from(&self.cov);
        big.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-w));
        big.fixed_view_mut::<4, 4>(4, 0).copy_from(&w);
        let min = big.symmetric_eigenvalues().min();
        Ok(min >= -1e-9 * (1.0 + self.cov.amax()))
    }
}

/// Moments pushed through the rows of the map: `mu -> L mu + a`,
/// `Sigma -> L Sigma L^T`.
pub fn evolve(state: &GaussianState, map: &NumericCanonicalMap) -> GaussianState {
    let l = map.linear();
    GaussianState {
        mean: l * state.mean + map.affine(),
        cov: l * state.cov * l.transpose(),
    }
}

/// State `S rho S^dagger` in the target chart of the map.
pub fn transform_state(state: &GaussianState, map: &NumericCanonicalMap) -> Result<GaussianState> {
    Ok(evolve(state, &map.inverse()?))
}

/// `<obs>` for an observable of degree at most 2, read in Weyl-symmetric
/// form. Coefficients are evaluated with `bindings`; the commutator
/// constants come from `hbar` and `kappa` there.
pub fn expectation(state: &GaussianState, obs: &WeylPoly, bindings: &NumBindings) -> Result<f64> {
    if obs.degree() > 2 {
        return Err(Error::NotQuadratic(obs.to_string()));
    }
    let w = omega(bindings)?;
    let mu = &state.mean;
    let mut total = num_complex::Complex64::new(0.0, 0.0);
    for (e, c) in obs.terms() {
        let c = c.eval(bindings)?;
        let idx: Vec<usize> = (0..4).flat_map(|k| std::iter::repeat_n(k, e[k] as usize)).collect();
        let value = match idx.as_slice() {
            [] => num_complex::Complex64::new(1.0, 0.0),
            [k] => mu[*k].into(),
            [i, j] => {
                // normal order puts v_i left of v_j; v_i v_j = sym + [v_i, v_j]/2
                let sym = state.cov[(*i, *j)] + mu[*i] * mu[*j];
                num_complex::Complex64::new(sym, 0.5 * w[(*i, *j)])
            }
            _ => unreachable!("degree checked"),
        };
        total += c * value;
    }
    if total.im.abs() > 1e-9 * (1.0 + total.re.abs()) {
        return Err(Error::NotReal(total.to_string()));
    }
    Ok(total.re)
}

/// Summary of [`invariance_check`].
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub trials: usize,
    pub seed: u64,
    pub max_deviation: f64,
    pub max_defect: f64,
}

fn rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Scalar {
    Scalar::from_ratio(rng.gen_range(lo..=hi), den)
}

fn random_symmetric(rng: &mut ChaCha8Rng, scale: f64) -> Matrix4<f64> {
    let mut h = Matrix4::zeros();
    for i in 0..4 {
        for j in i..4 {
            let v = rng.gen_range(-scale..scale);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    h
}

/// Random physical state: a thermal product state squeezed and rotated by
/// `exp(W H)` with `H` symmetric.
pub fn random_state(rng: &mut ChaCha8Rng, bindings: &NumBindings) -> Result<GaussianState> {
    let w = omega(bindings)?;
    let (k, h) = (w[(0, 1)], w[(2, 3)]);
    let n1 = 1.0 + rng.gen_range(0.0..1.0);
    let n2 = 1.0 + rng.gen_range(0.0..1.0);
    let base = Matrix4::from_diagonal(&Vector4::new(k * n1 / 2.0, k * n1 / 2.0, h * n2 / 2.0, h * n2 / 2.0));
    let s = (w * random_symmetric(rng, 0.5)).exp();
    let mean = Vector4::from_fn(|_, _| rng.gen_range(-2.0..2.0));
    let cov = s * base * s.transpose();
    GaussianState::new(mean, (cov + cov.transpose()) * 0.5)
}

/// Random Hermitian observable of degree <= 2 with rational coefficients.
pub fn random_observable(rng: &mut ChaCha8Rng) -> Result<WeylPoly> {
    let vars: Vec<WeylPoly> = PhaseVariable::ALL.iter().map(|&v| WeylPoly::var(v)).collect();
    let mut o = WeylPoly::constant(rational(rng, -8, 8, 4));
    for i in 0..4 {
        o = &o + &vars[i].scale(&rational(rng, -8, 8, 4));
        for j in i..4 {
            let sym = &vars[i].multiply(&vars[j])? + &vars[j].multiply(&vars[i])?;
            o = &o + &sym.scale(&rational(rng, -8, 8, 8));
        }
    }
    Ok(o)
}

/// Compiled frame changes `C -> A` used by the numeric checks: translation,
/// translation with evolution, boost, and the composite at `hbar = kappa`.
pub fn compiled_words() -> Result<Vec<(&'static str, CanonicalMap, bool)>> {
    let (c, a) = (Particle::C, Particle::A);
    Ok(vec![
        ("Sx", QrfWord::sx(c, a)?.compile()?.map, false),
        ("ST", QrfWord::st(c, a)?.compile()?.map, false),
        ("Sb", QrfWord::sb(c, a)?.compile()?.map, false),
        ("SD", sd_composed(c, a)?.equal_constants()?.map, true),
    ])
}

fn to_numeric(b: &Bindings) -> Result<NumBindings> {
    b.iter()
        .map(|(s, v)| Ok((*s, v.eval_real(&NumBindings::new())?)))
        .collect()
}

/// `|<O>_rho - <S O S^dagger>_{S rho S^dagger}|` maximized over random
/// states, observables, masses, times and words.
pub fn invariance_check(n_trials: usize, seed: u64) -> Result<InvarianceReport> {
    let words = compiled_words()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    let mut max_defect: f64 = 0.0;
    for trial in 0..n_trials {
        let (_, map, equal) = &words[trial % words.len()];
        let mut b = Bindings::new();
        for s in [Symbol::MassA, Symbol::MassB, Symbol::MassC] {
            b.insert(s, rational(&mut rng, 2, 12, 4));
        }
        b.insert(Symbol::Time, rational(&mut rng, -8, 8, 4));
        let h = rational(&mut rng, 2, 8, 4);
        b.insert(
            Symbol::Kappa,
            if *equal { h.clone() } else { rational(&mut rng, 2, 8, 4) },
        );
        b.insert(Symbol::Hbar, h);
        let exact = map.substitute(&b)?;
        let num = to_numeric(&b)?;
        let nmap = numeric_compile(&exact, &num)?;
        max_defect = max_defect.max(nmap.defect);
        let state = random_state(&mut rng, &num)?;
        let obs = random_observable(&mut rng)?;
        let image = exact.apply_to_operator(&obs)?;
        let before = expectation(&state, &obs, &num)?;
        let after = expectation(&transform_state(&state, &nmap)?, &image, &num)?;
        max_deviation = max_deviation.max((before - after).abs());
    }
    Ok(InvarianceReport {
        trials: n_trials,
        seed,
        max_deviation,
        max_defect,
    })
}

/// Central difference of the translation-with-evolution map in `t` against
/// `M N`, where `N` is the adjoint action of the derivative term
/// `i hbar (dS/dt) S^dagger` with prefactor `-1/hbar`. Returns the largest
/// entrywise difference.
pub fn finite_difference_check(step: f64) -> Result<f64> {
    let compiled = QrfWord::st(Particle::C, Particle::A)?.compile()?;
    let n = adjoint_matrix(&compiled.derivative, &(-&Scalar::hbar().inv()?))?;
    let rhs = compiled.map.matrix() * n.matrix();
    let mut values = NumBindings::new();
    for (s, v) in [
        (Symbol::MassA, 1.0),
        (Symbol::MassB, 2.0),
        (Symbol::MassC, 3.0),
        (Symbol::Hbar, 1.0),
        (Symbol::Kappa, 1.3),
    ] {
        values.insert(s, v);
    }
    let t0 = 0.7;
    let at = |t: f64| -> Result<Matrix5<f64>> {
        let mut v = values.clone();
        v.insert(Symbol::Time, t);
        numeric_matrix(compiled.map.matrix(), &v)
    };
    let fd = (at(t0 + step)? - at(t0 - step)?) / (2.0 * step);
    let mut v = values.clone();
    v.insert(Symbol::Time, t0);
    let symbolic: Matrix5<f64> = numeric_matrix(&rhs, &v)?;
    Ok((fd - symbolic).amax())
}

/// Relational position expectations for particles localized at `a` and `b`
/// relative to `C`, after the translation to frame `A`:
/// `(<x_B - x_C>, <x_B>)` in frame `A`.
pub fn measurement_numeric(a: f64, b: f64, width: f64) -> Result<(f64, f64)> {
    let compiled = QrfWord::sx(Particle::C, Particle::A)?.compile()?;
    let mut values = NumBindings::new();
    values.insert(Symbol::Hbar, 1.0);
    values.insert(Symbol::Kappa, 1.0);
    let nmap = numeric_compile(&compiled.map, &values)?;
    let state = GaussianState::localized([a, 0.0, b, 0.0], width, &values)?;
    let moved = transform_state(&state, &nmap)?;
    let names = compiled.target.names();
    let parser = Parser::new().with_variable_names([&names[0], &names[1], &names[2], &names[3]]);
    let rel = parser.parse("x_B - x_C")?;
    let pos = parser.parse("x_B")?;
    Ok((expectation(&moved, &rel, &values)?, expectation(&moved, &pos, &values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, parse_scalar};

    fn unit_constants() -> NumBindings {
        let mut v = NumBindings::new();
        v.insert(Symbol::Hbar, 1.0);
        v.insert(Symbol::Kappa, 1.0);
        v
    }

    #[test]
    fn translation_matrix() {
        let up = crate::canon::exp_adjoint(&parse("x_A*p_B").unwrap(), &parse_scalar("1/hbar").unwrap()).unwrap();
        let n = numeric_compile(&up, &unit_constants()).unwrap();
        let expect = Matrix4::new(
            1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0,
        );
        assert_eq!(n.linear(), expect);
        let s = GaussianState::localized([1.0, 0.0, 3.0, 0.0], DELTA_WIDTH, &unit_constants()).unwrap();
        assert_eq!(evolve(&s, &n).mean[2], 4.0);
        assert_eq!(evolve(&s, &NumericCanonicalMap::identity()), s);
    }

    #[test]
    fn defect_is_reported() {
        let mut m = Matrix::identity(5);
        m[(0, 0)] = Scalar::from_int(2);
        let r = numeric_compile(&CanonicalMap::new(m), &unit_constants());
        assert!(matches!(r, Err(Error::SymplecticDefect(_))));
    }

    #[test]
    fn expectations_of_simple_observables() {
        let v = unit_constants();
        let s = GaussianState::localized([1.0, 0.5, 3.0, 0.0], 0.25, &v).unwrap();
        assert!(s.is_physical(&v).unwrap());
        assert_eq!(expectation(&s, &WeylPoly::one(), &v).unwrap(), 1.0);
        assert_eq!(expectation(&s, &parse("x_B").unwrap(), &v).unwrap(), 3.0);
        // sym(x p) = x p - i kappa / 2
        let d = parse("(x_A*p_A + p_A*x_A)/2").unwrap();
        assert!((expectation(&s, &d, &v).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            expectation(&s, &parse("x_A^3").unwrap(), &v),
            Err(Error::NotQuadratic(_))
        ));
        assert!(matches!(
            expectation(&s, &parse("x_A*p_A").unwrap(), &v),
            Err(Error::NotReal(_))
        ));
    }

    #[test]
    fn random_states_are_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut v = unit_constants();
        v.insert(Symbol::Kappa, 0.6);
        for _ in 0..20 {
            assert!(random_state(&mut rng, &v).unwrap().is_physical(&v).unwrap());
        }
        let bad = GaussianState::new(Vector4::zeros(), Matrix4::identity() * 0.1).unwrap();
        assert!(!bad.is_physical(&v).unwrap());
    }

    #[test]
    fn small_invariance_run() {
        let r = invariance_check(24, 3).unwrap();
        assert!(r.max_deviation <= 1e-10, "{r:?}");
        assert!(r.max_defect <= 1e-12, "{r:?}");
    }

    #[test]
    fn derivative_term_by_finite_differences() {
        assert!(finite_difference_check(1e-5).unwrap() <= 1e-6);
    }

    #[test]
    fn measurement_values() {
        let (rel, pos) = measurement_numeric(1.0, 3.0, DELTA_WIDTH).unwrap();
        assert!((rel - 3.0).abs() < 1e-10 && (pos - 2.0).abs() < 1e-10);
        let (rel2, _) = measurement_numeric(1.0, 3.0, DELTA_WIDTH / 10.0).unwrap();
        assert!((rel - rel2).abs() < 1e-12);
    }
}
