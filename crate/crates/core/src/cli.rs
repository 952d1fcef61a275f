//! Command-line dispatcher: parses arguments, runs one computation and
//! writes JSON (or CSV for `density`) to the output stream.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::factorize;
use crate::cache::Cache;
use crate::chowdeg::{self, indices_of, DimensionProfile, MultiClass};
use crate::cmfield::{galois_orbit, hilbert_class_poly};
use crate::config::Config;
use crate::descent::{self, Lemma71Outcome};
use crate::error::{Error, Result};
use crate::lattices::{self, SpecialCurveLabel};
use crate::modpoly::{self, inclusion_with, Grid, ModularPolynomial};
use crate::poly::{parse_rational, Poly};
use crate::quadforms::{class_group, is_split};
use crate::sl2mod::{self, FiniteMatrixGroup, Lemma43Outcome, ProductSubgroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "speciallocus", version, about = "Special points and special subvarieties of products of modular curves")]
struct Cli {
    /// Working precision in bits for numerical evaluation.
    #[arg(long, global = true, default_value_t = 256)]
    precision: u32,
    /// Largest modular polynomial level that will be built.
    #[arg(long, global = true, default_value_t = 20)]
    m_max: u64,
    /// Cap for prime searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    search_cap: u64,
    /// Largest group order the group commands will enumerate.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: u64,
    /// Cache directory (default: $SPECIALLOCUS_CACHE or ./cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the on-disk cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Seed for randomized fixtures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Class group of discriminant D.
    Classgroup {
        #[arg(allow_negative_numbers = true)]
        d: BigInt,
    },
    /// Whether l splits in the order of discriminant D.
    Split {
        l: u64,
        #[arg(allow_negative_numbers = true)]
        d: BigInt,
    },
    /// Hilbert class polynomial H_D.
    Hilbert {
        #[arg(allow_negative_numbers = true)]
        d: BigInt,
    },
    /// CM points of discriminant D with their j-values.
    Orbit {
        #[arg(allow_negative_numbers = true)]
        d: BigInt,
        /// Decimal digits printed per value.
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Classical modular polynomial Φ_m (terms with i ≥ j).
    Modpoly { m: u64 },
    /// T_m applied to a point with rational coordinates.
    Hecke {
        m: u64,
        #[arg(required = true, allow_negative_numbers = true)]
        j: Vec<String>,
    },
    /// Whether H_D(y) divides Res_x(H_D(x), Φ_l(x, y)).
    Inclusion {
        #[arg(allow_negative_numbers = true)]
        d: BigInt,
        l: u64,
    },
    /// Per-step grid coverage of a Hecke orbit, as CSV.
    Density {
        m: u64,
        steps: usize,
        /// Starting j-value as "re" or "re,im".
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        j0: String,
    },
    /// Multidegree bookkeeping on (P¹)ⁿ.
    Chow {
        #[command(subcommand)]
        op: ChowOp,
    },
    /// Effective Chebotarev threshold.
    Chebotarev {
        n_m: u64,
        #[arg(allow_negative_numbers = true)]
        d_m: BigInt,
    },
    /// Least prime ≥ --min split in every given order.
    Splitprime {
        #[arg(required = true, allow_negative_numbers = true)]
        discs: Vec<BigInt>,
        #[arg(long, default_value_t = 2)]
        min: u64,
    },
    /// Search for a prime meeting the three conditions for two curves.
    Lemma71 {
        d1: u64,
        d2: u64,
        #[arg(allow_negative_numbers = true)]
        disc1: BigInt,
        #[arg(allow_negative_numbers = true)]
        disc2: BigInt,
    },
    /// Ledger of the dimension descent.
    Descent { n: usize, d: usize, a0: BigUint, m_x: BigUint },
    /// Lattice classes: relative position and centers.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Pairwise matrix and multidegree of a special-curve label.
    Label {
        #[arg(required = true)]
        n: Vec<u64>,
    },
    /// ψ/φ inequalities for the counting argument.
    Counting {
        r: u64,
        m: u64,
        n: Vec<u64>,
    },
    /// Facts about SL₂(ℤ/N)/{±1}.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
}

#[derive(Subcommand, Debug)]
enum ChowOp {
    /// Product of two classes (JSON).
    Mul { u: String, v: String },
    /// Degree against the very ample class.
    Degree { z: String },
    /// Pushforward under T_l.
    Push { z: String, l: u64 },
    /// Class of the hypersurface cutting Z ∩ T_l Z.
    Bound { z: String, l: u64 },
    /// Minimal subsets of a dimension profile given in bitmask order.
    Minimal {
        n: usize,
        #[arg(required = true)]
        dims: Vec<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeOp {
    /// Relative position of two lattices "a,b;c,d".
    Pos { b1: String, b2: String },
    /// Center of three lattices.
    Center { b1: String, b2: String, b3: String },
}

#[derive(Subcommand, Debug)]
enum GroupOp {
    Order { n: u64 },
    Minindex { n: u64, cap: u64 },
    Normal { n: u64 },
    Sym2 { l: u64 },
    /// Goursat data of a random subgroup of G × G (seeded).
    Goursat {
        n: u64,
        /// Use the graph of a random inner automorphism.
        #[arg(long)]
        twist: bool,
    },
    /// Pairwise surjectivity test for random generators of Gⁿ (seeded).
    Lemma43 {
        n_mod: u64,
        n: usize,
        #[arg(long, default_value_t = 2)]
        gens: usize,
        #[arg(long, default_value_t = 1_000_000)]
        verify_budget: u64,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let mut config = Config::from_env();
    config.precision_bits = cli.precision;
    config.m_max = cli.m_max;
    config.search_cap = cli.search_cap;
    config.enumeration_budget = cli.budget;
    if let Some(d) = &cli.cache_dir {
        config.cache_dir = d.clone();
    }
    let cache = (!cli.no_cache).then(|| Cache::new(config.cache_dir.clone()));
    let result = config.validate().and_then(|_| dispatch(&cli, &config, cache.as_ref()));
    match result {
        Ok(Output::Json(v)) => {
            let _ = writeln!(out, "{v}");
            EXIT_OK
        }
        Ok(Output::Text(s)) => {
            let _ = write!(out, "{s}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_resource() {
                EXIT_RESOURCE
            } else {
                EXIT_DOMAIN
            }
        }
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn s<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

/// H_D through the cache; cached polynomials are checked for degree h(D)
/// and monicity.
pub fn cached_hilbert(d: &BigInt, cache: Option<&Cache>) -> Result<Poly> {
    if let Some(c) = cache {
        if let Ok(Some(p)) = c.load_hilbert(d) {
            let h = class_group(d)?.h();
            if p.degree() == h as isize && p.is_monic() {
                return Ok(p);
            }
        }
    }
    let hp = hilbert_class_poly(d)?;
    if let Some(c) = cache {
        let _ = c.store_hilbert(d, &hp.poly);
    }
    Ok(hp.poly)
}

/// Φ_m through the cache; cached polynomials are re-verified.
pub fn cached_modular_poly(m: u64, m_max: u64, cache: Option<&Cache>) -> Result<std::sync::Arc<ModularPolynomial>> {
    if m == 0 || m > m_max {
        return modpoly::modular_poly(m, m_max);
    }
    if let Some(c) = cache {
        if let Ok(Some(f)) = c.load_phi(m) {
            if let Ok(mp) = modpoly::remember(ModularPolynomial { level: m, poly: f }) {
                return Ok(mp);
            }
        }
    }
    let mp = modpoly::modular_poly(m, m_max)?;
    if let Some(c) = cache {
        let _ = c.store_phi(m, &mp.poly);
    }
    Ok(mp)
}

fn parse_class(text: &str) -> Result<MultiClass> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("bad class JSON: {e}")))?;
    MultiClass::from_json(&v)
}

fn parse_j0(text: &str) -> Result<Complex64> {
    let mut parts = text.split(',');
    let num = |p: Option<&str>| -> Result<f64> {
        match p {
            None => Ok(0.0),
            Some(x) => x.trim().parse().map_err(|_| Error::InvalidInput(format!("bad number {x:?}"))),
        }
    };
    let re = num(parts.next())?;
    let im = num(parts.next())?;
    if parts.next().is_some() {
        return Err(Error::InvalidInput(format!("bad complex value {text:?}")));
    }
    Ok(Complex64::new(re, im))
}

fn mat_json(m: sl2mod::Mat) -> Value {
    json!([[m[0], m[1]], [m[2], m[3]]])
}

fn dispatch(cli: &Cli, config: &Config, cache: Option<&Cache>) -> Result<Output> {
    let v = match &cli.cmd {
        Cmd::Classgroup { d } => {
            let g = class_group(d)?;
            let forms: Vec<Value> = g.classes.iter().map(|f| json!([s(&f.a), s(&f.b), s(&f.c)])).collect();
            json!({ "D": s(d), "h": g.h(), "forms": forms, "structure": g.structure })
        }
        Cmd::Split { l, d } => json!({ "l": l, "D": s(d), "split": is_split(*l, d)? }),
        Cmd::Hilbert { d } => {
            let p = cached_hilbert(d, cache)?;
            let coeffs: Vec<Value> = p.coeffs().iter().rev().map(s).collect();
            json!({ "D": s(d), "degree": p.degree(), "coeffs": coeffs })
        }
        Cmd::Orbit { d, digits } => {
            let o = galois_orbit(d, config.precision_bits)?;
            let pts: Vec<Value> = o
                .points
                .iter()
                .map(|p| {
                    json!({
                        "form": [s(&p.form.a), s(&p.form.b), s(&p.form.c)],
                        "tau": [p.tau.re.to_decimal(*digits), p.tau.im.to_decimal(*digits)],
                        "j": [p.j_value.re.to_decimal(*digits), p.j_value.im.to_decimal(*digits)],
                    })
                })
                .collect();
            json!({ "D": s(d), "h": o.len(), "points": pts })
        }
        Cmd::Modpoly { m } => {
            let mp = cached_modular_poly(*m, config.m_max, cache)?;
            let mut terms: Vec<_> = mp.poly.terms().into_iter().filter(|(i, j, _)| i >= j).collect();
            terms.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
            let terms: Vec<Value> = terms.into_iter().map(|(i, j, c)| json!([i, j, s(c)])).collect();
            json!({ "m": m, "degree": mp.degree(), "terms": terms })
        }
        Cmd::Hecke { m, j } => {
            let point = j
                .iter()
                .map(|x| parse_rational(x).ok_or_else(|| Error::InvalidInput(format!("bad rational {x:?}"))))
                .collect::<Result<Vec<_>>>()?;
            cached_modular_poly(*m, config.m_max, cache)?;
            let img = modpoly::hecke_image(&point, *m, config.precision_bits, config.m_max)?;
            let coords: Vec<Value> = img
                .per_coordinate
                .iter()
                .map(|roots| {
                    Value::Array(
                        roots
                            .iter()
                            .map(|r| {
                                json!({
                                    "re": r.re, "im": r.im, "radius": r.radius,
                                    "exact": r.exact.as_ref().map(s),
                                    "multiplicity": r.multiplicity,
                                })
                            })
                            .collect(),
                    )
                })
                .collect();
            let src: Vec<Value> = point
                .iter()
                .map(|(n, d)| if d.is_one() { s(n) } else { s(format!("{n}/{d}")) })
                .collect();
            json!({ "m": m, "point": src, "targets": img.target_count(), "roots": coords })
        }
        Cmd::Inclusion { d, l } => {
            if !is_split(*l, d)? {
                return Err(Error::Precondition(format!("{l} does not split in the order of discriminant {d}")));
            }
            let h = cached_hilbert(d, cache)?;
            let phi = cached_modular_poly(*l, config.m_max, cache)?;
            let cp = crate::cmfield::ClassPolynomial { disc: d.clone(), poly: h, bits: 0, attempts: 0 };
            let c = inclusion_with(&cp, &phi)?;
            json!({
                "D": s(d), "l": l, "holds": c.holds,
                "resultant_degree": c.resultant.degree(),
                "quotient_degree": c.quotient.as_ref().map(|q| q.degree()),
            })
        }
        Cmd::Density { m, steps, j0 } => {
            let r = modpoly::orbit_density_probe(parse_j0(j0)?, *m, *steps, &Grid::standard())?;
            return Ok(Output::Text(r.to_csv()));
        }
        Cmd::Chow { op } => chow(op)?,
        Cmd::Chebotarev { n_m, d_m } => {
            let c = descent::chebotarev_threshold(*n_m, d_m)?;
            json!({ "n_M": n_m, "d_M": s(d_m), "x_min": c.x_min })
        }
        Cmd::Splitprime { discs, min } => {
            let sp = descent::split_prime_search(discs, *min, config.search_cap)?;
            json!({ "l": sp.l, "log_bound": sp.log_bound, "within_log_bound": sp.within_log_bound })
        }
        Cmd::Lemma71 { d1, d2, disc1, disc2 } => match descent::lemma71_feasible(*d1, *d2, disc1, disc2, config.search_cap)? {
            Lemma71Outcome::Feasible(c) => json!({
                "feasible": true, "l": c.l, "h1": c.h1, "h2": c.h2,
                "intersection": s(&c.intersection), "verified": c.verify()?,
            }),
            Lemma71Outcome::Infeasible { binding, h1, h2 } => json!({
                "feasible": false, "h1": h1, "h2": h2,
                "binding": binding.map(|b| format!("{b:?}")),
            }),
        },
        Cmd::Descent { n, d, a0, m_x } => descent::descent_simulate(*n, *d, a0, m_x)?.to_json(),
        Cmd::Lattice { op } => match op {
            LatticeOp::Pos { b1, b2 } => {
                let l1 = lattices::canonicalize(&lattices::parse_basis(b1)?)?;
                let l2 = lattices::canonicalize(&lattices::parse_basis(b2)?)?;
                let n = lattices::relative_position(&l1, &l2);
                let dist: Vec<Value> = match n.to_u64() {
                    Some(k) if k > 1 => factorize(k).into_iter().map(|(p, e)| json!({ "p": p, "distance": e })).collect(),
                    _ => Vec::new(),
                };
                json!({ "L1": l1.to_string(), "L2": l2.to_string(), "n": s(n), "distances": dist })
            }
            LatticeOp::Center { b1, b2, b3 } => {
                let ls = [b1, b2, b3]
                    .iter()
                    .map(|b| lattices::canonicalize(&lattices::parse_basis(b)?))
                    .collect::<Result<Vec<_>>>()?;
                let c = lattices::center_of_three(&ls[0], &ls[1], &ls[2])?;
                json!({ "center": c.center.to_string(), "n": c.n.iter().map(s).collect::<Vec<_>>() })
            }
        },
        Cmd::Label { n } => {
            let label = SpecialCurveLabel::new(n.clone())?;
            let pairwise = lattices::label_pairwise(&label);
            let md = if n.len() >= 2 {
                match lattices::label_multidegree(&label) {
                    Ok(m) => m.to_json(),
                    Err(e) if e.is_resource() => Value::Null,
                    Err(e) => return Err(e),
                }
            } else {
                Value::Null
            };
            json!({ "label": n, "pairwise": pairwise, "multidegree": md })
        }
        Cmd::Counting { r, m, n } => {
            let rep = lattices::counting_report(n, *r, *m)?;
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .map(|x| {
                    json!({
                        "n": x.n, "psi": x.psi, "phi": x.phi, "pi": x.pi,
                        "psi_bound": x.psi_bound, "phi_bound": x.phi_bound,
                    })
                })
                .collect();
            json!({
                "r": r, "m": m, "rows": rows, "cutoff": rep.cutoff,
                "admissible_count": rep.admissible.len(),
                "largest_admissible": rep.largest_admissible,
            })
        }
        Cmd::Group { op } => group(op, config, cli.seed)?,
    };
    Ok(Output::Json(v))
}

fn chow(op: &ChowOp) -> Result<Value> {
    Ok(match op {
        ChowOp::Mul { u, v } => chowdeg::chow_mul(&parse_class(u)?, &parse_class(v)?)?.to_json(),
        ChowOp::Degree { z } => json!({ "degree": s(chowdeg::very_ample_degree(&parse_class(z)?)?) }),
        ChowOp::Push { z, l } => chowdeg::hecke_pushforward(&parse_class(z)?, *l).to_json(),
        ChowOp::Bound { z, l } => chowdeg::hypersurface_bound(&parse_class(z)?, *l)?.to_json(),
        ChowOp::Minimal { n, dims } => {
            let p = DimensionProfile::new(*n, dims.clone())?;
            let mins: Vec<Vec<usize>> = chowdeg::minimal_subsets(&p).into_iter().map(indices_of).collect();
            json!({ "n": n, "minimal": mins })
        }
    })
}

fn group(op: &GroupOp, config: &Config, seed: u64) -> Result<Value> {
    let budget = config.enumeration_budget;
    Ok(match op {
        GroupOp::Order { n } => json!({ "N": n, "order": sl2mod::group_order(*n)? }),
        GroupOp::Minindex { n, cap } => match sl2mod::min_proper_index(*n, *cap, budget)? {
            Some(r) => json!({
                "index": r.index, "witness_order": r.witness_order,
                "witness_generators": r.witness_generators.into_iter().map(mat_json).collect::<Vec<_>>(),
            }),
            None => json!({ "index": null, "cap": cap }),
        },
        GroupOp::Normal { n } => {
            let ns = sl2mod::normal_subgroups(*n, budget)?;
            let list: Vec<Value> = ns
                .into_iter()
                .map(|x| json!({ "order": x.order, "kernel_of_reduction_mod": x.kernel_of_reduction_mod }))
                .collect();
            json!({ "N": n, "normal_subgroups": list })
        }
        GroupOp::Sym2 { l } => json!({ "l": l, "irreducible": sl2mod::sym2_irreducible(*l)? }),
        GroupOp::Goursat { n, twist } => {
            let g = FiniteMatrixGroup::new(*n, budget)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xs = sl2mod::random_tuples(&g, 1, 3, &mut rng);
            let generators: Vec<(u32, u32)> = if *twist {
                let c = sl2mod::random_tuples(&g, 1, 1, &mut rng)[0][0];
                let ci = g.inv(c);
                g.generators().iter().map(|&x| (x, g.mul(g.mul(c, x), ci))).collect()
            } else {
                let ys = sl2mod::random_tuples(&g, 1, 3, &mut rng);
                xs.iter().zip(&ys).map(|(x, y)| (x[0], y[0])).collect()
            };
            let h = ProductSubgroup { a: &g, b: &g, generators };
            let d = sl2mod::goursat_decompose(&h)?;
            json!({
                "N": n,
                "kernel_a_order": d.kernel_a.len(),
                "kernel_b_order": d.kernel_b.len(),
                "quotient_order": d.iso.len(),
                "inner": d.inner.map(|(count, w)| json!({ "count": count, "conjugator": mat_json(g.elem(w)) })),
            })
        }
        GroupOp::Lemma43 { n_mod, n, gens, verify_budget } => {
            let g = FiniteMatrixGroup::new(*n_mod, budget)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tuples = sl2mod::random_tuples(&g, *n, *gens, &mut rng);
            match sl2mod::lemma43_check(&g, *n, &tuples, *verify_budget)? {
                Lemma43Outcome::Full { order } => json!({ "full": true, "order": s(order) }),
                Lemma43Outcome::PairNotSurjective(i, j) => json!({ "full": false, "failing_pair": [i, j] }),
            }
        }
    })
}
