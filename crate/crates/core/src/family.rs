//! Black-box tensor families and shuffle-algebra elements.
//!
//! A `TensorFamily` is a tensor-valued function of the spectral
//! variables: an arity plus a deterministic evaluator. Shuffle products,
//! trace maps and residues never build symbolic closed forms; they
//! compose evaluators, so every identity stays checkable at any size by
//! exact evaluation.

use crate::error::Error;
use crate::jet::JetScalar;
use crate::point::{sample_point, EvalPoint, SampleSpec};
use crate::space::GradedSpace;
use crate::tensor::Tensor;
use crate::Result;
use rand::Rng;
use std::fmt;
use std::sync::Arc;

pub type EvalFn = Arc<dyn Fn(&EvalPoint, &[JetScalar]) -> Result<Tensor> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&EvalPoint) -> Result<JetScalar> + Send + Sync>;

#[derive(Clone)]
pub struct TensorFamily {
    space: GradedSpace,
    arity: usize,
    /// Whether spectral parameters exit the box multiplied by q
    /// (bookkeeping carried by shuffle-algebra elements).
    pub shifts_q: bool,
    /// Coarse total-degree bound used for the reported false-accept
    /// probability of randomized equality checks.
    pub degree_bound: u64,
    eval: EvalFn,
}

impl TensorFamily {
    pub fn new(space: GradedSpace, arity: usize, shifts_q: bool, degree_bound: u64, eval: EvalFn) -> Self {
        TensorFamily { space, arity, shifts_q, degree_bound, eval }
    }

    pub fn constant(t: Tensor) -> Self {
        let space = t.space().clone();
        let arity = t.arity();
        TensorFamily {
            space,
            arity,
            shifts_q: false,
            degree_bound: 1,
            eval: Arc::new(move |_pt, _zs| Ok(t.clone())),
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, pt: &EvalPoint, zs: &[JetScalar]) -> Result<Tensor> {
        if zs.len() != self.arity {
            return Err(Error::Config(format!(
                "family of arity {} evaluated on {} variables",
                self.arity,
                zs.len()
            )));
        }
        (self.eval)(pt, zs)
    }

    /// Evaluates at the point's own z-list.
    pub fn eval_at(&self, pt: &EvalPoint) -> Result<Tensor> {
        let zs = pt.zs.clone();
        self.eval(pt, &zs)
    }

    pub fn add(&self, other: &TensorFamily) -> Result<TensorFamily> {
        if self.space != other.space || self.arity != other.arity {
            return Err(Error::SpaceMismatch);
        }
        let (a, b) = (self.clone(), other.clone());
        Ok(TensorFamily {
            space: self.space.clone(),
            arity: self.arity,
            shifts_q: self.shifts_q,
            degree_bound: self.degree_bound.max(other.degree_bound) + 1,
            eval: Arc::new(move |pt, zs| a.eval(pt, zs)?.add(&b.eval(pt, zs)?)),
        })
    }

    pub fn sub(&self, other: &TensorFamily) -> Result<TensorFamily> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TensorFamily {
        let a = self.clone();
        TensorFamily {
            space: self.space.clone(),
            arity: self.arity,
            shifts_q: self.shifts_q,
            degree_bound: self.degree_bound,
            eval: Arc::new(move |pt, zs| Ok(a.eval(pt, zs)?.neg())),
        }
    }

    /// Pointwise scaling by a scalar function of the parameters.
    pub fn scale(&self, s: ScalarFn) -> TensorFamily {
        let a = self.clone();
        TensorFamily {
            space: self.space.clone(),
            arity: self.arity,
            shifts_q: self.shifts_q,
            degree_bound: self.degree_bound + 4,
            eval: Arc::new(move |pt, zs| Ok(a.eval(pt, zs)?.scale(&s(pt)?))),
        }
    }
}

impl fmt::Debug for TensorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorFamily(dim {}, arity {})", self.space.dim(), self.arity)
    }
}

/// Which product applies to an element.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlgebraTag {
    Plus,
    Minus,
    Prime,
    /// Plain tensors outside any of the three algebras.
    Generic,
}

impl AlgebraTag {
    pub fn name(&self) -> &'static str {
        match self {
            AlgebraTag::Plus => "A+",
            AlgebraTag::Minus => "A-",
            AlgebraTag::Prime => "A'",
            AlgebraTag::Generic => "generic",
        }
    }

    pub fn compatible(&self, other: &AlgebraTag) -> bool {
        self == other || *self == AlgebraTag::Generic || *other == AlgebraTag::Generic
    }
}

/// A shuffle-algebra element: a tensor family plus its algebra tag and
/// the structural properties claimed for it (checked by tests, not
/// enforced at construction).
#[derive(Clone, Debug)]
pub struct ShuffleElement {
    pub family: TensorFamily,
    pub tag: AlgebraTag,
    pub claimed_symmetric: bool,
    pub claimed_slope0: bool,
}

impl ShuffleElement {
    pub fn new(family: TensorFamily, tag: AlgebraTag) -> Self {
        ShuffleElement { family, tag, claimed_symmetric: false, claimed_slope0: false }
    }

    pub fn space(&self) -> &GradedSpace {
        self.family.space()
    }

    pub fn arity(&self) -> usize {
        self.family.arity()
    }

    pub fn with_claims(mut self, symmetric: bool, slope0: bool) -> Self {
        self.claimed_symmetric = symmetric;
        self.claimed_slope0 = slope0;
        self
    }

    pub fn add(&self, other: &ShuffleElement) -> Result<ShuffleElement> {
        if !self.tag.compatible(&other.tag) {
            return Err(Error::TagMismatch(self.tag.name().into(), other.tag.name().into()));
        }
        Ok(ShuffleElement::new(self.family.add(&other.family)?, self.tag))
    }

    pub fn neg(&self) -> ShuffleElement {
        ShuffleElement::new(self.family.neg(), self.tag)
    }

    pub fn scale(&self, s: ScalarFn) -> ShuffleElement {
        ShuffleElement::new(self.family.scale(s), self.tag)
    }
}

/// Result of a randomized equality check.
#[derive(Clone, Debug)]
pub struct EqReport {
    pub equal: bool,
    pub trials: u32,
    pub points: u32,
    /// log10 of the Schwartz-Zippel false-accept bound, assuming the
    /// caller-supplied total-degree bounds.
    pub failure_bound_log10: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct EqOptions {
    pub trials: u32,
    pub order: usize,
    pub kmax: i64,
    pub retry_budget: u32,
}

impl Default for EqOptions {
    fn default() -> Self {
        EqOptions { trials: 3, order: crate::point::DEFAULT_ORDER, kmax: crate::point::DEFAULT_KMAX, retry_budget: 8 }
    }
}

fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::EvaluationAtPole { .. }
            | Error::DivisionByExactZero
            | Error::PoleAtArgument
            | Error::SingularAtArgument
            | Error::SumOfVariablesZero
    )
}

/// Samples a point, runs `f`, and retries with a fresh point when the
/// evaluation lands on a pole locus.
pub fn with_sampled_point<R, T, F>(rng: &mut R, spec: SampleSpec, budget: u32, mut f: F) -> Result<T>
where
    R: Rng + ?Sized,
    F: FnMut(&EvalPoint) -> Result<T>,
{
    let mut tries = 0;
    loop {
        let pt = sample_point(rng, spec)?;
        match f(&pt) {
            Ok(v) => return Ok(v),
            Err(e) if retryable(&e) && tries < budget => {
                tries += 1;
            }
            Err(e) => {
                return Err(if retryable(&e) { Error::EvaluationAtPole { retries: tries } } else { e });
            }
        }
    }
}

/// Randomized equality of two tensor families: all entries must match
/// exactly at `trials` independently sampled points. Declared
/// inequality is certain; declared equality carries the reported
/// Schwartz-Zippel bound.
pub fn prob_equal<R: Rng + ?Sized>(
    f: &TensorFamily,
    g: &TensorFamily,
    opts: EqOptions,
    rng: &mut R,
) -> Result<EqReport> {
    if f.space() != g.space() || f.arity() != g.arity() {
        return Err(Error::SpaceMismatch);
    }
    let spec = SampleSpec::new(f.space().dim(), f.arity()).with_order(opts.order).with_kmax(opts.kmax);
    let mut points = 0;
    for _ in 0..opts.trials {
        let equal_here = with_sampled_point(rng, spec, opts.retry_budget, |pt| {
            let zs = pt.zs.clone();
            let a = f.eval(pt, &zs)?;
            let b = g.eval(pt, &zs)?;
            Ok(a == b)
        })?;
        points += 1;
        if !equal_here {
            return Ok(EqReport {
                equal: false,
                trials: opts.trials,
                points,
                failure_bound_log10: 0.0,
            });
        }
    }
    let p = crate::field::prime() as f64;
    let d = f.degree_bound.max(g.degree_bound) as f64;
    let per_trial = (d / (p - 1.0)).max(f64::MIN_POSITIVE);
    Ok(EqReport {
        equal: true,
        trials: opts.trials,
        points,
        failure_bound_log10: per_trial.log10() * opts.trials as f64,
    })
}

/// Randomized equality of two scalar functions of the parameters and
/// one spectral variable, wrapped as 1 x 1 tensor families.
pub fn prob_equal_scalars<R, F, G>(
    f: F,
    g: G,
    opts: EqOptions,
    rng: &mut R,
) -> Result<EqReport>
where
    R: Rng + ?Sized,
    F: Fn(&EvalPoint, &JetScalar) -> Result<JetScalar> + Send + Sync + 'static,
    G: Fn(&EvalPoint, &JetScalar) -> Result<JetScalar> + Send + Sync + 'static,
{
    let space = GradedSpace::standard(1, 0);
    let wrap = |h: Arc<dyn Fn(&EvalPoint, &JetScalar) -> Result<JetScalar> + Send + Sync>| {
        let space = space.clone();
        TensorFamily::new(
            space.clone(),
            1,
            false,
            64,
            Arc::new(move |pt: &EvalPoint, zs: &[JetScalar]| {
                let mut t = Tensor::zeros(space.clone(), 1, pt.order);
                t.set(0, 0, h(pt, &zs[0])?);
                Ok(t)
            }),
        )
    };
    let ff = wrap(Arc::new(f));
    let gg = wrap(Arc::new(g));
    prob_equal(&ff, &gg, opts, rng)
}

pub fn prob_equal_elements<R: Rng + ?Sized>(
    a: &ShuffleElement,
    b: &ShuffleElement,
    opts: EqOptions,
    rng: &mut R,
) -> Result<EqReport> {
    prob_equal(&a.family, &b.family, opts, rng)
}
