//! Signals on the time lattice `t = n*T` and the closed-form families used to
//! build them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest monomial degree accepted by [`ClosedForm::validate`].
pub const MAX_MONOMIAL_DEGREE: u32 = 6;

/// Highest derivative order produced by [`ClosedForm::derivative`].
pub const MAX_DERIVATIVE_ORDER: u32 = 3;

/// Uniform time lattice with positive step `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    step: f64,
}

impl Lattice {
    pub fn new(step: f64) -> Result<Self> {
        if step > 0.0 && step.is_finite() {
            Ok(Self { step })
        } else {
            Err(Error::InvalidArgument(format!("lattice step must be positive, got {step}")))
        }
    }

    pub fn unit() -> Self {
        Self { step: 1.0 }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn time(&self, n: i64) -> f64 {
        n as f64 * self.step
    }
}

impl Default for Lattice {
    fn default() -> Self {
        Self::unit()
    }
}

/// Closed-form entire functions of `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    Exp(f64),
    Sin(f64),
    Cos(f64),
    Monomial(u32),
    Constant(f64),
    Combination(Vec<(f64, ClosedForm)>),
}

impl ClosedForm {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ClosedForm::Exp(rate) => (rate * t).exp(),
            ClosedForm::Sin(freq) => (freq * t).sin(),
            ClosedForm::Cos(freq) => (freq * t).cos(),
            ClosedForm::Monomial(k) => t.powi(*k as i32),
            ClosedForm::Constant(c) => *c,
            ClosedForm::Combination(terms) => terms.iter().map(|(w, f)| w * f.eval(t)).sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{what} must be finite, got {x}")))
            }
        };
        match self {
            ClosedForm::Exp(x) | ClosedForm::Sin(x) | ClosedForm::Cos(x) => finite(*x, "rate"),
            ClosedForm::Constant(c) => finite(*c, "constant"),
            ClosedForm::Monomial(k) if *k > MAX_MONOMIAL_DEGREE => {
                Err(Error::InvalidArgument(format!("monomial degree {k} exceeds {MAX_MONOMIAL_DEGREE}")))
            }
            ClosedForm::Monomial(_) => Ok(()),
            ClosedForm::Combination(terms) => {
                if terms.is_empty() {
                    return Err(Error::InvalidArgument("empty combination".into()));
                }
                terms.iter().try_for_each(|(w, f)| {
                    finite(*w, "weight")?;
                    f.validate()
                })
            }
        }
    }

    /// Exact symbolic derivative of order `1..=3`.
    pub fn derivative(&self, order: u32) -> Result<ClosedForm> {
        if order == 0 || order > MAX_DERIVATIVE_ORDER {
            return Err(Error::InvalidArgument(format!(
                "derivative order must be in 1..={MAX_DERIVATIVE_ORDER}, got {order}"
            )));
        }
        Ok(self.derive(order))
    }

    fn derive(&self, order: u32) -> ClosedForm {
        let scale = |rate: f64| rate.powi(order as i32);
        match *self {
            ClosedForm::Exp(rate) => ClosedForm::Combination(vec![(scale(rate), self.clone())]),
            ClosedForm::Sin(freq) | ClosedForm::Cos(freq) => {
                // d/dt rotates (sin, cos) -> (cos, -sin); track the phase in quarter turns.
                let start = if matches!(self, ClosedForm::Sin(_)) { 0 } else { 1 };
                let (sign, form) = match (start + order) % 4 {
                    0 => (1.0, ClosedForm::Sin(freq)),
                    1 => (1.0, ClosedForm::Cos(freq)),
                    2 => (-1.0, ClosedForm::Sin(freq)),
                    _ => (-1.0, ClosedForm::Cos(freq)),
                };
                ClosedForm::Combination(vec![(sign * scale(freq), form)])
            }
            ClosedForm::Monomial(k) if order > k => ClosedForm::Constant(0.0),
            ClosedForm::Monomial(k) => {
                let falling: f64 = (k - order + 1..=k).map(f64::from).product();
                ClosedForm::Combination(vec![(falling, ClosedForm::Monomial(k - order))])
            }
            ClosedForm::Constant(_) => ClosedForm::Constant(0.0),
            ClosedForm::Combination(ref terms) => {
                ClosedForm::Combination(terms.iter().map(|(w, f)| (*w, f.derive(order))).collect())
            }
        }
    }

    fn components(&self) -> Vec<(f64, &ClosedForm)> {
        match self {
            ClosedForm::Combination(terms) => {
                terms.iter().flat_map(|(w, f)| f.components().into_iter().map(move |(v, g)| (w * v, g))).collect()
            }
            other => vec![(1.0, other)],
        }
    }

    /// Shape summary used by the operator guards and the series engine.
    pub fn traits(&self) -> SignalTraits {
        self.components().into_iter().filter(|(w, _)| *w != 0.0).fold(SignalTraits::default(), |acc, (_, f)| {
            let own = match *f {
                ClosedForm::Exp(rate) => SignalTraits { growth_rate: rate.abs(), ..Default::default() },
                ClosedForm::Sin(freq) | ClosedForm::Cos(freq) => {
                    SignalTraits { max_frequency: freq.abs(), ..Default::default() }
                }
                ClosedForm::Monomial(k) => SignalTraits { poly_degree: k, polynomial_part: true, ..Default::default() },
                ClosedForm::Constant(c) => SignalTraits { polynomial_part: c != 0.0, ..Default::default() },
                ClosedForm::Combination(_) => SignalTraits::default(),
            };
            acc.max(own)
        })
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::Exp(x) => write!(f, "exp:{x:?}"),
            ClosedForm::Sin(x) => write!(f, "sin:{x:?}"),
            ClosedForm::Cos(x) => write!(f, "cos:{x:?}"),
            ClosedForm::Monomial(k) => write!(f, "pow:{k}"),
            ClosedForm::Constant(c) => write!(f, "const:{c:?}"),
            ClosedForm::Combination(terms) => {
                for (i, (w, form)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    match form {
                        ClosedForm::Combination(_) => write!(f, "{w:?}*({form})")?,
                        _ => write!(f, "{w:?}*{form}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    /// Grammar: `exp:R | sin:R | cos:R | pow:K | const:R`, optionally prefixed
    /// by `W*`, joined by `+`.
    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: String| Error::Parse { input: input.to_string(), reason };
        let pieces = split_terms(input);
        if pieces.iter().any(|p| p.trim().is_empty()) {
            return Err(fail("empty term".into()));
        }
        let mut terms = Vec::with_capacity(pieces.len());
        for piece in &pieces {
            let piece = piece.trim();
            let (weight, atom) = match piece.split_once('*') {
                Some((w, a)) => {
                    let w: f64 = w.trim().parse().map_err(|_| fail(format!("bad weight {w:?}")))?;
                    (Some(w), a.trim())
                }
                None => (None, piece),
            };
            let atom = parse_atom(atom).map_err(fail)?;
            terms.push((weight, atom));
        }
        let form = match terms.as_slice() {
            [(None, atom)] => atom.clone(),
            _ => ClosedForm::Combination(terms.into_iter().map(|(w, a)| (w.unwrap_or(1.0), a)).collect()),
        };
        form.validate().map_err(|e| fail(e.to_string()))?;
        Ok(form)
    }
}

/// Split on `+`, except where the `+` belongs to an exponent such as `1e+3`.
fn split_terms(input: &str) -> Vec<&str> {
    let mut pieces = Vec::new();
    let mut start = 0;
    let bytes = input.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        let exponent = i > 0 && matches!(bytes[i - 1], b'e' | b'E') && i > start + 1 && bytes[i - 2].is_ascii_digit();
        if b == b'+' && !exponent {
            pieces.push(&input[start..i]);
            start = i + 1;
        }
    }
    pieces.push(&input[start..]);
    pieces
}

fn parse_atom(atom: &str) -> std::result::Result<ClosedForm, String> {
    let (kind, arg) = atom.split_once(':').ok_or_else(|| format!("expected KIND:VALUE, got {atom:?}"))?;
    let arg = arg.trim();
    let real = || arg.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| format!("bad number {arg:?}"));
    match kind.trim() {
        "exp" => real().map(ClosedForm::Exp),
        "sin" => real().map(ClosedForm::Sin),
        "cos" => real().map(ClosedForm::Cos),
        "const" => real().map(ClosedForm::Constant),
        "pow" => arg.parse::<u32>().map(ClosedForm::Monomial).map_err(|_| format!("bad degree {arg:?}")),
        other => Err(format!("unknown family {other:?}")),
    }
}

/// Coarse shape of a signal: exponential rate, oscillation frequency and
/// polynomial degree, each an upper bound over its components.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SignalTraits {
    pub growth_rate: f64,
    pub max_frequency: f64,
    pub poly_degree: u32,
    /// Whether the signal may contain a nonzero polynomial (or constant)
    /// component, i.e. spectral content at zero frequency.
    pub polynomial_part: bool,
}

impl SignalTraits {
    fn max(self, other: Self) -> Self {
        Self {
            growth_rate: self.growth_rate.max(other.growth_rate),
            max_frequency: self.max_frequency.max(other.max_frequency),
            poly_degree: self.poly_degree.max(other.poly_degree),
            polynomial_part: self.polynomial_part || other.polynomial_part,
        }
    }

    /// Traits of a pointwise product.
    fn product(self, other: Self) -> Self {
        Self {
            growth_rate: self.growth_rate + other.growth_rate,
            max_frequency: self.max_frequency + other.max_frequency,
            poly_degree: self.poly_degree + other.poly_degree,
            polynomial_part: self.polynomial_part && other.polynomial_part,
        }
    }
}

type Evaluator = Arc<dyn Fn(i64) -> f64 + Send + Sync>;

/// Function of the lattice index `n`, total over all integers.
#[derive(Clone)]
pub struct LatticeSignal {
    eval: Evaluator,
    lattice: Lattice,
    family: Option<ClosedForm>,
    traits: SignalTraits,
}

impl fmt::Debug for LatticeSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeSignal")
            .field("lattice", &self.lattice)
            .field("family", &self.family)
            .field("traits", &self.traits)
            .finish_non_exhaustive()
    }
}

impl LatticeSignal {
    /// Wrap an arbitrary evaluator. `traits` must bound the behaviour of `f`,
    /// since the operator guards rely on it.
    pub fn from_fn<F>(lattice: Lattice, traits: SignalTraits, f: F) -> Self
    where
        F: Fn(i64) -> f64 + Send + Sync + 'static,
    {
        Self { eval: Arc::new(f), lattice, family: None, traits }
    }

    pub fn at(&self, n: i64) -> f64 {
        (self.eval)(n)
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn family(&self) -> Option<&ClosedForm> {
        self.family.as_ref()
    }

    pub fn traits(&self) -> SignalTraits {
        self.traits
    }

    /// Per-step growth bound `e^{rate*T}`.
    pub fn growth_hint(&self) -> f64 {
        (self.traits.growth_rate * self.lattice.step).exp()
    }

    /// Pointwise product on the same lattice.
    pub fn product(&self, other: &LatticeSignal) -> LatticeSignal {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        LatticeSignal {
            eval: Arc::new(move |n| a(n) * b(n)),
            lattice: self.lattice,
            family: None,
            traits: self.traits.product(other.traits),
        }
    }

    /// `n -> self(n + offset)`.
    pub fn shifted(&self, offset: i64) -> LatticeSignal {
        let a = self.eval.clone();
        LatticeSignal {
            eval: Arc::new(move |n| a(n + offset)),
            lattice: self.lattice,
            family: None,
            traits: self.traits,
        }
    }

    /// `n -> weight * self(n)`.
    pub fn scaled(&self, weight: f64) -> LatticeSignal {
        let a = self.eval.clone();
        LatticeSignal {
            eval: Arc::new(move |n| weight * a(n)),
            lattice: self.lattice,
            family: self.family.as_ref().map(|f| ClosedForm::Combination(vec![(weight, f.clone())])),
            traits: self.traits,
        }
    }
}

/// Sample a closed form at `t = n*T`.
pub fn sample(form: &ClosedForm, lattice: Lattice) -> Result<LatticeSignal> {
    form.validate()?;
    let owned = form.clone();
    let step = lattice.step;
    Ok(LatticeSignal {
        eval: Arc::new(move |n| owned.eval(n as f64 * step)),
        lattice,
        family: Some(form.clone()),
        traits: form.traits(),
    })
}
