//! Weights a(x), their sign decompositions, and the nonlinearities f(s).
//!
//! The module also carries the exact dead-core family: for r = 2/(1-q) the
//! pair a(x) = r^(1-2/r) (1 - r cos^2 x), u(x) = sin^r(x)/r satisfies
//! -u'' = a u^q on (0, pi) with u = u' = 0 at both endpoints. It is the
//! analytic oracle used throughout the tests and the verify-pex experiment.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, Mesh, Subinterval};

/// Named closed-form weight expressions, constructible from the CLI config.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// a(x) = value.
    Constant { value: f64 },
    /// a(x) = sin(k x).
    Sin { k: f64 },
    /// a(x) = sin(k x) + c.
    SinPlus { k: f64, c: f64 },
    /// Positive part of the dead-core family weight at exponent q.
    PexPositive { q: f64 },
    /// Negative part (>= 0) of the dead-core family weight at exponent q.
    PexNegative { q: f64 },
    /// Dead-core family weight on [0, pi], constant `outside` elsewhere.
    PexExtended { q: f64, outside: f64 },
}

/// Tabulated weight: piecewise-linear interpolant of (x, a(x)) samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Tabulated {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidParameter(
                "tabulated weight needs >= 2 (x, a) pairs of equal length".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "tabulated weight abscissae must be strictly increasing".into(),
            ));
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "tabulated weight has non-finite entries".into(),
            ));
        }
        Ok(Tabulated { xs, ys })
    }

    /// Parse two whitespace- or comma-separated numeric columns; '#' comments.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if fields.len() != 2 {
                return Err(Error::InvalidParameter(format!(
                    "tabulated weight line {}: expected 2 columns, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!(
                        "tabulated weight line {}: bad number {s:?}",
                        lineno + 1
                    ))
                })
            };
            xs.push(parse(fields[0])?);
            ys.push(parse(fields[1])?);
        }
        Tabulated::new(xs, ys)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Tabulated::parse_str(&std::fs::read_to_string(path)?)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Linear interpolation; clamps to the end values outside the range.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= *self.xs.last().unwrap() {
            return *self.ys.last().unwrap();
        }
        let j = self.xs.partition_point(|&xi| xi <= x);
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let (y0, y1) = (self.ys[j - 1], self.ys[j]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Structural form of a weight.
#[derive(Debug, Clone)]
pub enum WeightForm {
    ClosedForm(ClosedForm),
    Tabulated(Tabulated),
    /// Dead-core family weight at exponent q on the whole line.
    Pex { q: f64 },
    /// a = aplus - mu * aminus with both parts nonnegative pointwise.
    ScaledCombination {
        aplus: Box<Weight>,
        aminus: Box<Weight>,
        mu: f64,
    },
}

/// A weight a(x), evaluable at arbitrary points and sampleable on a mesh.
#[derive(Debug, Clone)]
pub struct Weight {
    form: WeightForm,
}

fn check_exponent(q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "exponent q must lie in [0, 1), got {q}"
        )));
    }
    Ok(q)
}

/// r = 2 / (1 - q), the contact order of the dead-core family.
pub fn pex_contact_order(q: f64) -> f64 {
    2.0 / (1.0 - q)
}

fn pex_weight_value(q: f64, x: f64) -> f64 {
    let r = pex_contact_order(q);
    let c = x.cos();
    r.powf(1.0 - 2.0 / r) * (1.0 - r * c * c)
}

impl Weight {
    pub fn closed_form(form: ClosedForm) -> Self {
        Weight {
            form: WeightForm::ClosedForm(form),
        }
    }

    pub fn constant(value: f64) -> Self {
        Weight::closed_form(ClosedForm::Constant { value })
    }

    pub fn tabulated(t: Tabulated) -> Self {
        Weight {
            form: WeightForm::Tabulated(t),
        }
    }

    /// Dead-core family weight at exponent q.
    pub fn pex(q: f64) -> Result<Self> {
        check_exponent(q)?;
        Ok(Weight {
            form: WeightForm::Pex { q },
        })
    }

    /// a = aplus - mu * aminus. Both parts must be nonnegative pointwise;
    /// this is validated where the weight is sampled.
    pub fn scaled_combination(aplus: Weight, aminus: Weight, mu: f64) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "scaled combination needs mu >= 0, got {mu}"
            )));
        }
        Ok(Weight {
            form: WeightForm::ScaledCombination {
                aplus: Box::new(aplus),
                aminus: Box::new(aminus),
                mu,
            },
        })
    }

    pub fn form(&self) -> &WeightForm {
        &self.form
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.form {
            WeightForm::ClosedForm(cf) => match *cf {
                ClosedForm::Constant { value } => value,
                ClosedForm::Sin { k } => (k * x).sin(),
                ClosedForm::SinPlus { k, c } => (k * x).sin() + c,
                ClosedForm::PexPositive { q } => pex_weight_value(q, x).max(0.0),
                ClosedForm::PexNegative { q } => (-pex_weight_value(q, x)).max(0.0),
                ClosedForm::PexExtended { q, outside } => {
                    if (0.0..=PI).contains(&x) {
                        pex_weight_value(q, x)
                    } else {
                        outside
                    }
                }
            },
            WeightForm::Tabulated(t) => t.eval(x),
            WeightForm::Pex { q } => pex_weight_value(*q, x),
            WeightForm::ScaledCombination { aplus, aminus, mu } => {
                aplus.eval(x) - mu * aminus.eval(x)
            }
        }
    }

    /// Nodal samples on a mesh. Tabulated weights must cover the domain;
    /// scaled combinations must have genuinely nonnegative parts.
    pub fn sample(&self, mesh: &Arc<Mesh>) -> Result<GridFunction> {
        if let WeightForm::Tabulated(t) = &self.form {
            let (lo, hi) = t.range();
            let slack = 1e-9 * mesh.h();
            if mesh.left() < lo - slack || mesh.right() > hi + slack {
                return Err(Error::WeightNotAdmissible(format!(
                    "tabulated weight covers [{lo}, {hi}] but the mesh spans [{}, {}]",
                    mesh.left(),
                    mesh.right()
                )));
            }
        }
        if let WeightForm::ScaledCombination { aplus, aminus, .. } = &self.form {
            for (part, name) in [(aplus, "aplus"), (aminus, "aminus")] {
                let samples = part.sample(mesh)?;
                if samples.min_value() < -1e-12 * (1.0 + samples.sup_norm()) {
                    return Err(Error::WeightNotAdmissible(format!(
                        "scaled combination part {name} takes negative values"
                    )));
                }
            }
        }
        GridFunction::from_fn(mesh.clone(), |x| self.eval(x))
    }

    /// Short human-readable form for manifests and provenance strings.
    pub fn describe(&self) -> String {
        match &self.form {
            WeightForm::ClosedForm(cf) => match *cf {
                ClosedForm::Constant { value } => format!("const({value})"),
                ClosedForm::Sin { k } => format!("sin({k})"),
                ClosedForm::SinPlus { k, c } => format!("sin-plus({k},{c})"),
                ClosedForm::PexPositive { q } => format!("pex-plus({q})"),
                ClosedForm::PexNegative { q } => format!("pex-minus({q})"),
                ClosedForm::PexExtended { q, outside } => format!("pex-extended({q},{outside})"),
            },
            WeightForm::Tabulated(_) => "tabulated".into(),
            WeightForm::Pex { q } => format!("pex({q})"),
            WeightForm::ScaledCombination { mu, .. } => format!("scaled-combination(mu={mu})"),
        }
    }

    /// Parse a catalog spec such as `pex(0.5)`, `sin(3)`, `sin-plus(3,0.5)`,
    /// `const(-1)`, `pex-plus(0.5)`, `pex-minus(0.5)`, `pex-extended(0.5,-1)`,
    /// or `tabulated(path/to/file)`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, args) = split_spec(spec)?;
        let nums = |want: usize| -> Result<Vec<f64>> {
            let parsed: Vec<f64> = args
                .iter()
                .map(|a| {
                    a.parse::<f64>().map_err(|_| {
                        Error::Config(format!("weight {name:?}: bad numeric argument {a:?}"))
                    })
                })
                .collect::<Result<_>>()?;
            if parsed.len() != want {
                return Err(Error::Config(format!(
                    "weight {name:?} takes {want} argument(s), got {}",
                    parsed.len()
                )));
            }
            Ok(parsed)
        };
        match name.as_str() {
            "const" => Ok(Weight::constant(nums(1)?[0])),
            "sin" => Ok(Weight::closed_form(ClosedForm::Sin { k: nums(1)?[0] })),
            "sin-plus" => {
                let v = nums(2)?;
                Ok(Weight::closed_form(ClosedForm::SinPlus { k: v[0], c: v[1] }))
            }
            "pex" => Weight::pex(nums(1)?[0]),
            "pex-plus" => {
                let q = check_exponent(nums(1)?[0])?;
                Ok(Weight::closed_form(ClosedForm::PexPositive { q }))
            }
            "pex-minus" => {
                let q = check_exponent(nums(1)?[0])?;
                Ok(Weight::closed_form(ClosedForm::PexNegative { q }))
            }
            "pex-extended" => {
                let v = nums(2)?;
                let q = check_exponent(v[0])?;
                Ok(Weight::closed_form(ClosedForm::PexExtended {
                    q,
                    outside: v[1],
                }))
            }
            "tabulated" => {
                if args.len() != 1 {
                    return Err(Error::Config("tabulated takes one path argument".into()));
                }
                Ok(Weight::tabulated(Tabulated::from_file(
                    std::path::Path::new(&args[0]),
                )?))
            }
            other => Err(Error::Config(format!("unknown weight {other:?}"))),
        }
    }
}

fn split_spec(spec: &str) -> Result<(String, Vec<String>)> {
    match spec.find('(') {
        None => Ok((spec.to_string(), Vec::new())),
        Some(open) => {
            if !spec.ends_with(')') {
                return Err(Error::Config(format!("unbalanced parentheses in {spec:?}")));
            }
            let name = spec[..open].to_string();
            let inner = &spec[open + 1..spec.len() - 1];
            let args = inner
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            Ok((name, args))
        }
    }
}

/// Sign decomposition of a sampled weight.
#[derive(Debug, Clone)]
pub struct WeightSplit {
    /// Nodewise positive part max(a, 0).
    pub aplus: GridFunction,
    /// Nodewise negative part max(-a, 0).
    pub aminus: GridFunction,
    /// Maximal node runs where a > 0, as node-aligned subintervals.
    pub omega_plus: Vec<Subinterval>,
    /// True when the samples take both strictly positive and strictly
    /// negative values.
    pub changes_sign: bool,
}

impl WeightSplit {
    /// Widest positivity component, if any.
    pub fn largest_component(&self) -> Option<Subinterval> {
        self.omega_plus
            .iter()
            .copied()
            .max_by(|a, b| a.width().total_cmp(&b.width()))
    }
}

/// Decompose a weight on a mesh into positive/negative parts and positivity
/// components.
pub fn split(weight: &Weight, mesh: &Arc<Mesh>) -> Result<WeightSplit> {
    let a = weight.sample(mesh)?;
    let vals = a.values();
    let plus: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
    let minus: Vec<f64> = vals.iter().map(|&v| (-v).max(0.0)).collect();
    let mut omega_plus = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..=mesh.n() {
        let positive = vals[i] > 0.0;
        match (run_start, positive) {
            (None, true) => run_start = Some(i),
            (Some(s), false) => {
                push_component(&mut omega_plus, mesh, s, i - 1);
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        push_component(&mut omega_plus, mesh, s, mesh.n());
    }
    let has_negative = vals.iter().any(|&v| v < 0.0);
    let has_positive = !omega_plus.is_empty();
    Ok(WeightSplit {
        aplus: GridFunction::new(mesh.clone(), plus)?,
        aminus: GridFunction::new(mesh.clone(), minus)?,
        omega_plus,
        changes_sign: has_negative && has_positive,
    })
}

fn push_component(out: &mut Vec<Subinterval>, mesh: &Mesh, first: usize, last: usize) {
    if last > first {
        out.push(Subinterval {
            left: mesh.node(first),
            right: mesh.node(last),
        });
    }
}

/// Shared evaluator type for custom nonlinearities.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Nonlinearity f(s) on s >= 0.
#[derive(Clone)]
pub enum Nonlinearity {
    /// f(s) = s^q with 0 <= q < 1 (q = 0 gives f == 1).
    Power { q: f64 },
    /// User-supplied evaluator with optional derivative.
    Custom {
        name: String,
        f: ScalarFn,
        df: Option<ScalarFn>,
    },
    /// Concave-convex right-hand side lambda a(x) s^q + s^p. The weight
    /// multiplies only the concave term; `eval` reports the a == 1 section.
    ConcaveConvex { lambda: f64, q: f64, p: f64 },
}

impl std::fmt::Debug for Nonlinearity {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.write_str(&self.describe())
    }
}

impl Nonlinearity {
    pub fn power(q: f64) -> Result<Self> {
        check_exponent(q)?;
        Ok(Nonlinearity::Power { q })
    }

    pub fn custom(
        name: impl Into<String>,
        f: ScalarFn,
        df: Option<ScalarFn>,
    ) -> Self {
        Nonlinearity::Custom {
            name: name.into(),
            f,
            df,
        }
    }

    pub fn concave_convex(lambda: f64, q: f64, p: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "concave-convex needs lambda > 0, got {lambda}"
            )));
        }
        if !(0.0 < q && q < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "concave-convex needs 0 < q < 1, got {q}"
            )));
        }
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "concave-convex needs p > 1, got {p}"
            )));
        }
        Ok(Nonlinearity::ConcaveConvex { lambda, q, p })
    }

    /// f(s); negative arguments are treated as 0.
    pub fn eval(&self, s: f64) -> f64 {
        let s = s.max(0.0);
        match self {
            Nonlinearity::Power { q } => s.powf(*q),
            Nonlinearity::Custom { f, .. } => f(s),
            Nonlinearity::ConcaveConvex { lambda, q, p } => lambda * s.powf(*q) + s.powf(*p),
        }
    }

    /// f'(s) for s > 0. Power derivatives blow up at 0 for 0 < q < 1;
    /// callers floor the argument. Custom nonlinearities without an explicit
    /// derivative fall back to a central difference.
    pub fn derivative(&self, s: f64) -> f64 {
        let s = s.max(0.0);
        match self {
            Nonlinearity::Power { q } => {
                if *q == 0.0 {
                    0.0
                } else {
                    q * s.powf(q - 1.0)
                }
            }
            Nonlinearity::Custom { f, df, .. } => match df {
                Some(d) => d(s),
                None => {
                    let step = 1e-6 * (1.0 + s.abs());
                    (f(s + step) - f((s - step).max(0.0))) / (step + s.min(step))
                }
            },
            Nonlinearity::ConcaveConvex { lambda, q, p } => {
                lambda * q * s.powf(q - 1.0) + p * s.powf(p - 1.0)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Nonlinearity::Power { q } => format!("power({q})"),
            Nonlinearity::Custom { name, .. } => format!("custom({name})"),
            Nonlinearity::ConcaveConvex { lambda, q, p } => {
                format!("concave-convex({lambda},{q},{p})")
            }
        }
    }

    /// Parse `power(q)` or `concave-convex(lambda,q,p)`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, args) = split_spec(spec.trim())?;
        let nums: Vec<f64> = args
            .iter()
            .map(|a| {
                a.parse::<f64>()
                    .map_err(|_| Error::Config(format!("nonlinearity: bad argument {a:?}")))
            })
            .collect::<Result<_>>()?;
        match (name.as_str(), nums.len()) {
            ("power", 1) => Nonlinearity::power(nums[0]),
            ("concave-convex", 3) => Nonlinearity::concave_convex(nums[0], nums[1], nums[2]),
            _ => Err(Error::Config(format!(
                "unknown nonlinearity {spec:?} (expected power(q) or concave-convex(lambda,q,p))"
            ))),
        }
    }
}

/// Exact solution member of the dead-core family: u(x) = sin^r(x)/r on
/// [0, pi], extended by zero outside.
#[derive(Debug, Clone, Copy)]
pub struct PexSolution {
    q: f64,
    r: f64,
}

impl PexSolution {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn contact_order(&self) -> f64 {
        self.r
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !(0.0..=PI).contains(&x) {
            return 0.0;
        }
        x.sin().max(0.0).powf(self.r) / self.r
    }

    pub fn sample(&self, mesh: &Arc<Mesh>) -> Result<GridFunction> {
        GridFunction::from_fn(mesh.clone(), |x| self.eval(x))
    }
}

/// The exact pair (weight, solution) of the dead-core family at exponent q.
pub fn pex_pair(q: f64) -> Result<(Weight, PexSolution)> {
    check_exponent(q)?;
    let r = pex_contact_order(q);
    Ok((Weight::pex(q)?, PexSolution { q, r }))
}

/// Sampled infimum of the difference quotients (f(s) - f(t)) / (s - t) over
/// 0 <= t < s <= s0, on a triangular grid with `samples` points per axis.
pub fn k_constant(f: &Nonlinearity, s0: f64, samples: usize) -> Result<f64> {
    if !s0.is_finite() || s0 <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "k_constant needs s0 > 0, got {s0}"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter(
            "k_constant needs at least 2 samples per axis".into(),
        ));
    }
    let step = s0 / samples as f64;
    let values: Vec<f64> = (0..=samples).map(|i| f.eval(i as f64 * step)).collect();
    let mut inf = f64::INFINITY;
    for j in 1..=samples {
        for i in 0..j {
            let quotient = (values[j] - values[i]) / ((j - i) as f64 * step);
            inf = inf.min(quotient);
        }
    }
    Ok(inf)
}

/// Default triangular sampling density for [`k_constant`].
pub const K_CONSTANT_SAMPLES: usize = 400;

/// Growth diagnostics for the sublinear hypothesis: f(s)/s should be large
/// near zero and small near infinity.
#[derive(Debug, Clone, Copy)]
pub struct SublinearityReport {
    pub near_zero_ratio: f64,
    pub near_infinity_ratio: f64,
    pub consistent_with_sublinear: bool,
}

/// Evaluate f(s)/s at s = 1e-6 and s = 1e6.
pub fn sublinearity_report(f: &Nonlinearity) -> SublinearityReport {
    let near_zero_ratio = f.eval(1e-6) / 1e-6;
    let near_infinity_ratio = f.eval(1e6) / 1e6;
    SublinearityReport {
        near_zero_ratio,
        near_infinity_ratio,
        consistent_with_sublinear: near_zero_ratio > 1.0 && near_infinity_ratio < 1.0,
    }
}
