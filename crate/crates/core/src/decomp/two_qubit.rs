use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3};

use num_complex::Complex64;

use super::{PseudoMixture, Setting, SettingDecomposition, Term};
use crate::error::{Error, Result};
use crate::opalg::{
    c, cr, herm_eig, partial_transpose, schmidt, BipartiteDims, ComplexMatrix, Ket, Subsystem,
};

fn check_pair(alpha: f64, beta: f64) -> Result<()> {
    if alpha == 0.0 || beta == 0.0 || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Schmidt coefficients must be finite and nonzero, got ({alpha}, {beta})"
        )));
    }
    let norm = alpha * alpha + beta * beta;
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "alpha^2 + beta^2 = {norm}, expected 1"
        )));
    }
    Ok(())
}

pub fn z_basis() -> Vec<Ket> {
    vec![Ket::basis(2, 0), Ket::basis(2, 1)]
}

pub fn x_basis() -> Vec<Ket> {
    vec![
        Ket::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]),
        Ket::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]),
    ]
}

pub fn y_basis() -> Vec<Ket> {
    vec![
        Ket::new(vec![cr(FRAC_1_SQRT_2), c(0.0, FRAC_1_SQRT_2)]),
        Ket::new(vec![cr(FRAC_1_SQRT_2), c(0.0, -FRAC_1_SQRT_2)]),
    ]
}

/// Five-term pseudo-mixture of `(|φ><φ|)^{T_A}`, `φ = α|00> + β|11>`.
///
/// Opposite signs of `α` and `β` are handled by building the decomposition
/// for `(|α|, |β|)` and applying `σ_z` to every B-side vector.
pub fn onp_two_qubit(alpha: f64, beta: f64) -> Result<PseudoMixture> {
    check_pair(alpha, beta)?;
    let (a, b) = (alpha.abs(), beta.abs());
    let flip = alpha.signum() != beta.signum();
    let cos = (a / (a + b)).sqrt();
    let sin = (b / (a + b)).sqrt();
    let w = Complex64::from_polar(1.0, FRAC_PI_3);
    let f1 = Ket::new(vec![w.conj() * cos, w * sin]);
    let f2 = f1.conj();
    let f3 = Ket::from_real(&[cos, sin]);
    let bside = |k: &Ket| {
        if flip {
            Ket::new(vec![k[0], -k[1]])
        } else {
            k.clone()
        }
    };
    let weight = (a + b).powi(2) / 3.0;
    let mut terms: Vec<Term> = [f1, f2, f3]
        .into_iter()
        .map(|f| Term::new(weight, f.clone(), bside(&f)))
        .collect();
    terms.push(Term::new(-a * b, Ket::basis(2, 0), Ket::basis(2, 1)));
    terms.push(Term::new(-a * b, Ket::basis(2, 1), Ket::basis(2, 0)));
    Ok(PseudoMixture {
        dims: BipartiteDims::qubits(),
        terms,
    })
}

/// Three-setting decomposition in the `z⊗z`, `x⊗x`, `y⊗y` bases. Settings
/// whose weights all vanish are omitted.
pub fn ons_two_qubit(alpha: f64, beta: f64) -> Result<SettingDecomposition> {
    if alpha * beta == 0.0 {
        // product state: only the z setting survives
        let norm = alpha * alpha + beta * beta;
        if !alpha.is_finite() || !beta.is_finite() || (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "alpha^2 + beta^2 = {norm}, expected 1"
            )));
        }
    } else {
        check_pair(alpha, beta)?;
    }
    let ab = alpha * beta;
    let settings = [
        (
            z_basis(),
            z_basis(),
            [[alpha * alpha, 0.0], [0.0, beta * beta]],
        ),
        (x_basis(), x_basis(), [[ab, 0.0], [0.0, ab]]),
        (y_basis(), y_basis(), [[0.0, -ab], [-ab, 0.0]]),
    ]
    .into_iter()
    .map(|(basis_a, basis_b, w)| Setting {
        basis_a,
        basis_b,
        weights: w.iter().map(|r| r.to_vec()).collect(),
    })
    .filter(|s| !s.is_trivial())
    .collect();
    Ok(SettingDecomposition {
        dims: BipartiteDims::qubits(),
        settings,
    })
}

/// `φ` recovered from `W = (|φ><φ|)^{T_A}`, as Schmidt coefficients plus
/// the local frames `|k> ↦ conj(a_k)` (A side, conjugated by the partial
/// transpose) and `|k> ↦ b_k` (B side).
struct PureFrame {
    alpha: f64,
    beta: f64,
    frame_a: Vec<Ket>,
    frame_b: Vec<Ket>,
}

impl PureFrame {
    fn of(op: &ComplexMatrix) -> Result<Self> {
        let dims = BipartiteDims::qubits();
        dims.check(op.dim())?;
        let undone = partial_transpose(op, dims, Subsystem::A)?;
        let eig = herm_eig(&undone)?;
        let expected = [0.0, 0.0, 0.0, 1.0];
        let defect = eig
            .values
            .iter()
            .zip(expected)
            .fold(0.0_f64, |m, (v, e)| m.max((v - e).abs()));
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(
                "operator is not the partial transpose of a pure-state projector".into(),
            ));
        }
        let phi = &eig.vectors[3];
        // already of the form α|00> + β|11> with real amplitudes
        let phase = if phi[0].norm() > 1e-12 {
            phi[0]
        } else {
            phi[3]
        };
        let phase = phase / phase.norm();
        let rot: Vec<Complex64> = phi.amplitudes().iter().map(|z| z / phase).collect();
        if rot[1].norm() < 1e-12 && rot[2].norm() < 1e-12 && rot.iter().all(|z| z.im.abs() < 1e-12)
        {
            return Ok(Self {
                alpha: rot[0].re,
                beta: rot[3].re,
                frame_a: z_basis(),
                frame_b: z_basis(),
            });
        }
        let sf = schmidt(phi, dims)?;
        if sf.rank() < 2 {
            return Err(Error::InvalidArgument(
                "target state is a product state".into(),
            ));
        }
        Ok(Self {
            alpha: sf.coefficients[0],
            beta: sf.coefficients[1],
            frame_a: sf.basis_a.iter().map(Ket::conj).collect(),
            frame_b: sf.basis_b.clone(),
        })
    }

    fn map(frame: &[Ket], x: &Ket) -> Ket {
        let mut out = vec![Complex64::new(0.0, 0.0); 2];
        for (k, col) in frame.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(col.amplitudes()) {
                *o += x[k] * v;
            }
        }
        Ket::new(out)
    }
}

/// Five-term pseudo-mixture of any two-qubit `(|φ><φ|)^{T_A}` with `φ`
/// entangled: the canonical form for `φ`'s Schmidt coefficients, carried
/// over by the local frames.
pub fn onp_for_pure_pt(op: &ComplexMatrix) -> Result<PseudoMixture> {
    let fr = PureFrame::of(op)?;
    let mut pm = onp_two_qubit(fr.alpha, fr.beta)?;
    for t in &mut pm.terms {
        t.a = PureFrame::map(&fr.frame_a, &t.a);
        t.b = PureFrame::map(&fr.frame_b, &t.b);
    }
    Ok(pm)
}

/// Three-setting decomposition of any two-qubit `(|φ><φ|)^{T_A}`.
pub fn ons_for_pure_pt(op: &ComplexMatrix) -> Result<SettingDecomposition> {
    let fr = PureFrame::of(op)?;
    let mut sd = ons_two_qubit(fr.alpha, fr.beta)?;
    for s in &mut sd.settings {
        s.basis_a = s
            .basis_a
            .iter()
            .map(|k| PureFrame::map(&fr.frame_a, k))
            .collect();
        s.basis_b = s
            .basis_b
            .iter()
            .map(|k| PureFrame::map(&fr.frame_b, k))
            .collect();
    }
    Ok(sd)
}
