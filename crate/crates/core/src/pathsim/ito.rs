use super::quad::{chebyshev_unit, gauss_legendre_unit, Poly};
use super::PoissonPath;
use crate::{ChaosError, Result};

/// A pathwise integrand `s ↦ h_s(ω)` that, between consecutive breakpoints
/// and jump times, is a polynomial in `s` of degree at most [`degree`](Self::degree).
/// The value at a jump time must not see that jump (left-limit measurable).
pub trait PathIntegrand: Sync {
    fn degree(&self) -> usize;
    /// Deterministic times where the integrand may change form.
    fn breakpoints(&self) -> Vec<f64>;
    /// The integrand on one path.
    fn bind<'a>(&'a self, path: &'a PoissonPath) -> Box<dyn Fn(f64) -> f64 + 'a>;
}

/// Integrand given by a closure `(path, s) ↦ h_s`.
pub struct FnIntegrand<F> {
    pub degree: usize,
    pub breakpoints: Vec<f64>,
    pub f: F,
}

impl<F> PathIntegrand for FnIntegrand<F>
where
    F: Fn(&PoissonPath, f64) -> f64 + Sync,
{
    fn degree(&self) -> usize {
        self.degree
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn bind<'a>(&'a self, path: &'a PoissonPath) -> Box<dyn Fn(f64) -> f64 + 'a> {
        Box::new(move |s| (self.f)(path, s))
    }
}

/// One smooth stretch `(a, b]` of a trace: the integrand is the polynomial
/// `h(a + x(b−a))` in `x ∈ [0, 1]`, and the trace starts from `y_start` at `a`.
#[derive(Debug, Clone)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub y_start: f64,
    pub jump_at_end: bool,
    h: Poly,
    h_int: Poly,
}

impl Piece {
    /// Integrand at `s ∈ (a, b]`.
    pub fn integrand(&self, s: f64) -> f64 {
        self.h.eval(self.local(s))
    }

    /// Trace just before `s ∈ (a, b]` (equal to the trace inside the piece).
    pub fn value_left(&self, s: f64) -> f64 {
        self.y_start - (self.b - self.a) * self.h_int.eval(self.local(s))
    }

    fn local(&self, s: f64) -> f64 {
        if self.b > self.a {
            (s - self.a) / (self.b - self.a)
        } else {
            1.0
        }
    }

    /// Jump of the trace at `b`, zero unless `b` is a jump time.
    pub fn jump(&self) -> f64 {
        if self.jump_at_end {
            self.h.eval(1.0)
        } else {
            0.0
        }
    }
}

/// The càdlàg path `λ ↦ ∫_{from}^{λ} h_s dÑ_s` on `[from, to]`.
#[derive(Debug, Clone)]
pub struct PathTrace {
    from: f64,
    to: f64,
    pieces: Vec<Piece>,
}

impl PathTrace {
    pub fn horizon(&self) -> f64 {
        self.to
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Breakpoints: grid points and jump times in `[from, to]`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = vec![self.from];
        v.extend(self.pieces.iter().map(|p| p.b));
        v
    }

    fn piece_for(&self, lambda: f64) -> Option<&Piece> {
        if lambda <= self.from {
            return None;
        }
        let i = self.pieces.partition_point(|p| p.b < lambda);
        self.pieces.get(i.min(self.pieces.len().saturating_sub(1)))
    }

    /// Trace value at `λ`.
    pub fn value(&self, lambda: f64) -> f64 {
        match self.piece_for(lambda) {
            None => 0.0,
            Some(p) => {
                let v = p.value_left(lambda.min(p.b));
                if lambda >= p.b { v + p.jump() } else { v }
            }
        }
    }

    /// Left limit of the trace at `λ`.
    pub fn left_limit(&self, lambda: f64) -> f64 {
        match self.piece_for(lambda) {
            None => 0.0,
            Some(p) => p.value_left(lambda.min(p.b)),
        }
    }

    /// Terminal value at the horizon.
    pub fn terminal(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.value_left(p.b) + p.jump())
    }

    /// `∫ g(Y_{s−}, h_s) ds` over the horizon, by 16-point Gauss–Legendre per piece.
    pub fn integrate(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        let rule = gauss_legendre_unit();
        self.pieces
            .iter()
            .map(|p| {
                let len = p.b - p.a;
                len * rule
                    .iter()
                    .map(|&(x, w)| w * g(p.y_start - len * p.h_int.eval(x), p.h.eval(x)))
                    .sum::<f64>()
            })
            .sum()
    }

    /// `Σ_{jumps τ} g(Y_{τ−}, Y_τ, h_τ)`.
    pub fn jump_sum(&self, g: impl Fn(f64, f64, f64) -> f64) -> f64 {
        self.pieces
            .iter()
            .filter(|p| p.jump_at_end)
            .map(|p| {
                let left = p.value_left(p.b);
                let h = p.h.eval(1.0);
                g(left, left + h, h)
            })
            .sum()
    }
}

/// Build the trace of `∫_{from}^{λ} h dÑ` for `λ ∈ [from, to]`.
///
/// Between breakpoints the integrand is interpolated exactly by a polynomial
/// (it is one there), so the drift `∫h ds` is integrated in closed form.
pub fn trace(h: &dyn PathIntegrand, path: &PoissonPath, from: f64, to: f64) -> Result<PathTrace> {
    if !(0.0..=1.0).contains(&from) || !(from..=1.0).contains(&to) {
        return Err(ChaosError::InvalidInterval(format!("[{from}, {to}]")));
    }
    let mut cuts: Vec<(f64, bool)> = h
        .breakpoints()
        .into_iter()
        .filter(|&b| b > from && b < to)
        .map(|b| (b, false))
        .collect();
    cuts.extend(path.jumps().iter().filter(|&&j| j > from && j <= to).map(|&j| (j, true)));
    cuts.push((to, false));
    cuts.sort_by(|x, y| x.0.total_cmp(&y.0).then(y.1.cmp(&x.1)));
    // merge coincident cuts, keeping the jump flag
    let mut merged: Vec<(f64, bool)> = Vec::with_capacity(cuts.len());
    for (t, j) in cuts {
        match merged.last_mut() {
            Some(last) if last.0 == t => last.1 |= j,
            _ => merged.push((t, j)),
        }
    }
    let hf = h.bind(path);
    let nodes = chebyshev_unit(h.degree() + 1);
    let mut pieces = Vec::with_capacity(merged.len());
    let mut a = from;
    let mut y = 0.0;
    for (b, jump) in merged {
        if b <= a && !(jump && b == a) {
            continue;
        }
        let len = b - a;
        let ys: Vec<f64> = nodes.iter().map(|&x| hf(a + x * len)).collect();
        let poly = Poly::interpolate(&nodes, &ys);
        let h_int = poly.integral();
        let piece = Piece { a, b, y_start: y, jump_at_end: jump, h: poly, h_int };
        y = piece.value_left(b) + piece.jump();
        pieces.push(piece);
        a = b;
    }
    Ok(PathTrace { from, to, pieces })
}

/// `λ ↦ Y^λ = ∫_0^λ h_s dÑ_s` on `[0, t]`.
pub fn trace_y_lambda(h: &dyn PathIntegrand, t: f64, path: &PoissonPath) -> Result<PathTrace> {
    trace(h, path, 0.0, t)
}

/// `∫_0^t h_s dÑ_s = Σ_{τ ≤ t} h_τ − ∫_0^t h_s ds`.
pub fn ito_integral(h: &dyn PathIntegrand, path: &PoissonPath, t: f64) -> Result<f64> {
    Ok(trace(h, path, 0.0, t)?.terminal())
}

/// `∫_a^b h_s dÑ_s`.
pub fn ito_integral_between(h: &dyn PathIntegrand, path: &PoissonPath, a: f64, b: f64) -> Result<f64> {
    Ok(trace(h, path, a, b)?.terminal())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> PoissonPath {
        PoissonPath::new(vec![0.3, 0.7]).unwrap()
    }

    #[test]
    fn constant_integrand_gives_compensated_process() {
        let one = FnIntegrand { degree: 0, breakpoints: vec![], f: |_: &PoissonPath, _| 1.0 };
        for t in [0.0, 0.2, 0.3, 0.5, 1.0] {
            assert!((ito_integral(&one, &path(), t).unwrap() - path().compensated(t)).abs() < 1e-15);
        }
        let tr = trace(&one, &path(), 0.0, 1.0).unwrap();
        assert!((tr.value(0.3) - 0.7).abs() < 1e-15);
        assert!((tr.left_limit(0.3) + 0.3).abs() < 1e-15);
        assert_eq!(tr.value(0.0), 0.0);
    }

    #[test]
    fn left_limit_integrand() {
        let h = FnIntegrand { degree: 1, breakpoints: vec![], f: |p: &PoissonPath, s| p.compensated_left(s) };
        let v = ito_integral(&h, &path(), 1.0).unwrap();
        assert!((v + 0.5).abs() < 1e-14);
        // Ñ₁² = 2∫Ñ_{s−}dÑ_s + N₁
        assert!((path().compensated(1.0).powi(2) - (2.0 * v + 2.0)).abs() < 1e-14);
        assert_eq!(ito_integral(&h, &path(), 0.0).unwrap(), 0.0);
        assert!(ito_integral(&h, &path(), 1.5).is_err());
    }

    #[test]
    fn jump_on_breakpoint_is_kept() {
        let one = FnIntegrand { degree: 0, breakpoints: vec![0.5], f: |_: &PoissonPath, _| 1.0 };
        let p = PoissonPath::new(vec![0.5]).unwrap();
        assert!((ito_integral(&one, &p, 1.0).unwrap()).abs() < 1e-15);
        assert!((ito_integral(&one, &p, 0.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadrature_over_trace() {
        let one = FnIntegrand { degree: 0, breakpoints: vec![0.25, 0.5, 0.75], f: |_: &PoissonPath, _| 1.0 };
        let tr = trace(&one, &path(), 0.0, 1.0).unwrap();
        // ∫ Ñ_s ds on {0.3, 0.7}: ∫(N_s − s) = 0.7 + 0.3 − 0.5
        assert!((tr.integrate(|y, _| y) - 0.5).abs() < 1e-14);
        assert!((tr.jump_sum(|_, _, h| h) - 2.0).abs() < 1e-15);
    }
}
