use std::fmt;
use std::sync::Arc;

/// A bounded real function on `[1, ∞)`, used for the `β` and `γ` slots of
/// the exponential representation of an RO-varying weight.
#[derive(Clone)]
pub enum BoundedFn {
    Const(f64),
    /// `amp · sin(freq · ln t + phase)`
    SinLog {
        amp: f64,
        freq: f64,
        phase: f64,
    },
    /// `scale / (1 + ln t)`
    InvOnePlusLog {
        scale: f64,
    },
    Sum(Vec<BoundedFn>),
    /// Arbitrary callable; `bound` is the caller's claimed sup-norm.
    Custom {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        bound: Option<f64>,
    },
}

impl BoundedFn {
    pub fn custom<F>(f: F, bound: Option<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        BoundedFn::Custom {
            f: Arc::new(f),
            bound,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            BoundedFn::Const(c) => *c,
            BoundedFn::SinLog { amp, freq, phase } => amp * (freq * t.ln() + phase).sin(),
            BoundedFn::InvOnePlusLog { scale } => scale / (1.0 + t.ln()),
            BoundedFn::Sum(terms) => terms.iter().map(|g| g.eval(t)).sum(),
            BoundedFn::Custom { f, .. } => f(t),
        }
    }

    /// `f(eᵘ)`, computed without forming `eᵘ` for the closed forms.
    pub fn eval_log(&self, u: f64) -> f64 {
        match self {
            BoundedFn::Const(c) => *c,
            BoundedFn::SinLog { amp, freq, phase } => amp * (freq * u + phase).sin(),
            BoundedFn::InvOnePlusLog { scale } => scale / (1.0 + u),
            BoundedFn::Sum(terms) => terms.iter().map(|g| g.eval_log(u)).sum(),
            BoundedFn::Custom { f, .. } => f(u.exp()),
        }
    }

    /// Sup-norm bound on `[1, ∞)`; `None` when a custom callable came without one.
    pub fn bound(&self) -> Option<f64> {
        match self {
            BoundedFn::Const(c) => Some(c.abs()),
            BoundedFn::SinLog { amp, .. } => Some(amp.abs()),
            BoundedFn::InvOnePlusLog { scale } => Some(scale.abs()),
            BoundedFn::Sum(terms) => terms.iter().map(BoundedFn::bound).sum(),
            BoundedFn::Custom { bound, .. } => *bound,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BoundedFn::Const(c) => *c == 0.0,
            BoundedFn::Sum(terms) => terms.iter().all(BoundedFn::is_zero),
            _ => false,
        }
    }

    pub fn is_custom(&self) -> bool {
        match self {
            BoundedFn::Custom { .. } => true,
            BoundedFn::Sum(terms) => terms.iter().any(BoundedFn::is_custom),
            _ => false,
        }
    }
}

impl fmt::Debug for BoundedFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundedFn::Const(c) => write!(f, "Const({c})"),
            BoundedFn::SinLog { amp, freq, phase } => {
                write!(f, "SinLog {{ amp: {amp}, freq: {freq}, phase: {phase} }}")
            }
            BoundedFn::InvOnePlusLog { scale } => write!(f, "InvOnePlusLog {{ scale: {scale} }}"),
            BoundedFn::Sum(terms) => f.debug_tuple("Sum").field(terms).finish(),
            BoundedFn::Custom { bound, .. } => write!(f, "Custom {{ bound: {bound:?} }}"),
        }
    }
}

impl PartialEq for BoundedFn {
    fn eq(&self, other: &Self) -> bool {
        use BoundedFn::*;
        match (self, other) {
            (Const(a), Const(b)) => a == b,
            (
                SinLog { amp, freq, phase },
                SinLog {
                    amp: a2,
                    freq: f2,
                    phase: p2,
                },
            ) => amp == a2 && freq == f2 && phase == p2,
            (InvOnePlusLog { scale }, InvOnePlusLog { scale: s2 }) => scale == s2,
            (Sum(a), Sum(b)) => a == b,
            (Custom { f: a, .. }, Custom { f: b, .. }) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}
