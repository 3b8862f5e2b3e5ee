//! Seeds from flags or a JSON file.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use tsys_core::{LatticeState, LaurentPoly, MotzkinPath, SeedSpec, SeedVar};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Numeric {
    AllOnes,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    /// Rank of the A_r system.
    #[arg(long)]
    pub r: Option<usize>,
    /// Motzkin path as comma-separated integers, e.g. `1,0`; defaults to all zeros.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub motzkin: Option<Vec<i32>>,
    /// Inclusive j-window of the seed; sized to the dependence cone when omitted.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
    pub window: Option<Vec<i32>>,
    /// Evaluate at numbers instead of symbolically.
    #[arg(long, value_enum)]
    pub numeric: Option<Numeric>,
    #[arg(long, default_value_t = 1)]
    pub rng_seed: u64,
    /// JSON seed file `{r, motzkin, window, numeric?, values?}`.
    #[arg(long, conflicts_with_all = ["r", "motzkin", "window", "numeric"])]
    pub seed_file: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedFile {
    r: usize,
    motzkin: Option<Vec<i32>>,
    window: Option<(i32, i32)>,
    numeric: Option<Numeric>,
    rng_seed: Option<u64>,
    /// Explicit seed values, one per `(alpha, j, level)`, as `"p/q"` strings.
    values: Option<Vec<SeedValue>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedValue {
    alpha: i32,
    j: i32,
    level: i32,
    value: String,
}

pub enum Lattice {
    Symbolic(LatticeState<LaurentPoly>),
    Numeric(LatticeState<BigRational>),
}

impl Lattice {
    pub fn spec(&self) -> &SeedSpec {
        match self {
            Lattice::Symbolic(s) => s.spec(),
            Lattice::Numeric(s) => s.spec(),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    let bad = || Failure::Usage(format!("cannot parse seed value {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (p.trim().parse::<BigInt>().map_err(|_| bad())?, q.trim().parse::<BigInt>().map_err(|_| bad())?);
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.trim().parse::<BigInt>().map_err(|_| bad())?)),
    }
}

impl SeedArgs {
    fn read_file(&self) -> Result<SeedFile, Failure> {
        let path = self.seed_file.as_ref().expect("seed file");
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    /// Builds the lattice. `auto` gives the window when none is provided by flags.
    pub fn load(&self, default_r: usize, auto: impl Fn(usize, &MotzkinPath) -> (i32, i32)) -> Result<Lattice, Failure> {
        if self.seed_file.is_some() {
            return self.load_file();
        }
        let r = self.r.unwrap_or(default_r);
        let m = match &self.motzkin {
            Some(v) => MotzkinPath::new(v.clone())?,
            None => MotzkinPath::zero(r),
        };
        let window = match &self.window {
            Some(w) => (w[0], w[1]),
            None => auto(r, &m),
        };
        let spec = SeedSpec::new(r, m, window)?;
        Ok(match self.numeric {
            None => Lattice::Symbolic(LatticeState::symbolic(spec)),
            Some(Numeric::AllOnes) => Lattice::Numeric(LatticeState::all_ones(spec)),
            Some(Numeric::Random) => Lattice::Numeric(LatticeState::random(spec, self.rng_seed)),
        })
    }

    fn load_file(&self) -> Result<Lattice, Failure> {
        let f = self.read_file()?;
        let window = f.window.ok_or_else(|| Failure::Usage("seed file has no \"window\"".into()))?;
        let m = match f.motzkin {
            Some(v) => MotzkinPath::new(v)?,
            None => MotzkinPath::zero(f.r),
        };
        let spec = SeedSpec::new(f.r, m, window)?;
        if let Some(values) = f.values {
            if f.numeric.is_some() {
                return Err(Failure::Usage("seed file gives both \"numeric\" and \"values\"".into()));
            }
            let mut map = HashMap::new();
            for v in values {
                map.insert(SeedVar::new(v.alpha, v.j, v.level), parse_rational(&v.value)?);
            }
            return Ok(Lattice::Numeric(LatticeState::from_map(spec, &map)?));
        }
        Ok(match f.numeric {
            None => Lattice::Symbolic(LatticeState::symbolic(spec)),
            Some(Numeric::AllOnes) => Lattice::Numeric(LatticeState::all_ones(spec)),
            Some(Numeric::Random) => Lattice::Numeric(LatticeState::random(spec, f.rng_seed.unwrap_or(self.rng_seed))),
        })
    }
}
