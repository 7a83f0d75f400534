use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyhom::compare::{compare, CompareInput, CompareOptions};
use polyhom::format::{
    self, homology_json, homology_line, object_id, pretty, CategoryJson, ChainComplexJson, PolygraphInput,
    PolygraphJson,
};
use polyhom::{Error, Input};
use polyhom_core::fincat::{classical_nerve, compare_street_with_classical, street_nerve, MAX_ORIENTAL};
use polyhom_core::{
    check_slice_identification, colimit, comparison, conduche_check, grothendieck, lambda, polygraphic_homology,
    reassemble, slice, ChainComplex, Finite2Category, FiniteCategory, HomologyGroup, Polygraph, TopDegree,
};
use serde_json::json;

/// Exact homology of polygraphs, categories and presented monoids.
#[derive(Parser)]
#[command(name = "polyhom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Json {
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse any supported file and run its validator.
    Validate { path: PathBuf },
    /// Homology of the abelianization of a polygraph.
    LambdaHomology {
        path: PathBuf,
        #[arg(long, default_value_t = 2)]
        up_to: usize,
        /// The polygraph has no generators above its top dimension.
        #[arg(long)]
        complete: bool,
        #[command(flatten)]
        json: Json,
    },
    /// Homology of the classical nerve, degrees below the truncation.
    NerveHomology {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[command(flatten)]
        json: Json,
    },
    /// Simplices and homology of the Street nerve of a 1- or 2-category.
    StreetNerve {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// Also check a 1-category against its classical nerve.
        #[arg(long)]
        check_classical: bool,
        #[command(flatten)]
        json: Json,
    },
    /// The slice of a free ω-category over an object of the base.
    Slice {
        path: PathBuf,
        #[arg(long)]
        at: String,
        #[command(flatten)]
        json: Json,
    },
    /// Glue all slices back together and compare with the domain.
    Reassemble {
        path: PathBuf,
        #[command(flatten)]
        json: Json,
    },
    /// Decide whether a functor between finite categories is a discrete
    /// Conduché functor.
    Conduche { path: PathBuf },
    /// Grothendieck construction and colimit of a diagram of categories.
    /// A plain category is read as the diagram of its slices.
    Grothendieck {
        path: PathBuf,
        #[command(flatten)]
        json: Json,
    },
    /// Truncated polygraphic resolution of a convergent rewriting system.
    Resolve {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        json: Json,
    },
    /// Polygraphic homology against nerve homology.
    Compare {
        path: PathBuf,
        #[arg(long, default_value_t = 2)]
        up_to: usize,
        /// Only compute the polygraphic side.
        #[arg(long)]
        pol_only: bool,
        #[arg(long)]
        complete: bool,
        /// Weight bound for the nerve chains of an infinite monoid.
        #[arg(long, default_value_t = 6)]
        weight: usize,
        #[command(flatten)]
        json: Json,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn wrong_input(input: &Input, wanted: &str) -> Error {
    Error::invalid(format!("expected {wanted}, found a {}", input.kind()))
}

fn ranks(p: &Polygraph) -> Vec<usize> {
    (0..=p.max_dim()).map(|n| p.basis(n).len()).collect()
}

fn check_polygraph(p: &Polygraph) -> Result<(), Error> {
    let report = p.validate();
    if report.is_ok() {
        return Ok(());
    }
    let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    Err(Error::Invalid(lines.join("; ")))
}

fn check_complex(c: &ChainComplex) -> Result<(), Error> {
    if c.verify() {
        Ok(())
    } else {
        Err(Error::invalid("the differentials do not square to zero"))
    }
}

fn describe_category(c: &FiniteCategory) -> String {
    format!("{} object(s), {} morphism(s)", c.num_objects(), c.num_morphisms())
}

fn print_homology(groups: &[HomologyGroup], complex: &ChainComplex, json: bool) {
    if json {
        let v = json!({
            "chain_complex": ChainComplexJson::from_complex(complex),
            "homology": homology_json(groups),
        });
        println!("{}", pretty(&v));
    } else {
        println!("{}", homology_line(groups));
    }
}

fn print_generators(p: &Polygraph) {
    for g in p.generators() {
        match (&g.source, &g.target) {
            (Some(s), Some(t)) => println!("  {} (dim {}): {s} -> {t}", g.id.name, g.id.dim),
            _ => println!("  {} (dim {})", g.id.name, g.id.dim),
        }
    }
}

fn read(path: &Path) -> Result<Input, Error> {
    format::read_file(path)
}

fn two_category(input: Input) -> Result<(Finite2Category, Option<FiniteCategory>), Error> {
    match input {
        Input::Category(c) => Ok((Finite2Category::from_category(c.clone()), Some(c))),
        Input::TwoCategory(c) => Ok((c, None)),
        other => Err(wrong_input(&other, "a category or a 2-category")),
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Validate { path } => {
            let input = read(&path)?;
            let summary = match &input {
                Input::Polygraph(p) => {
                    check_polygraph(&p.polygraph)?;
                    format!("generators per dimension {:?}", ranks(&p.polygraph))
                }
                Input::Resolved(r) => {
                    check_polygraph(&r.resolution.polygraph)?;
                    format!(
                        "{}; resolution generators per dimension {:?}",
                        describe_category(&r.category),
                        ranks(&r.resolution.polygraph)
                    )
                }
                Input::ChainComplex(c) => {
                    check_complex(c)?;
                    format!("ranks {:?}", c.ranks())
                }
                Input::Category(c) => describe_category(c),
                Input::TwoCategory(c) => format!("{}, {} 2-cell(s)", describe_category(c.base()), c.cells().len()),
                Input::FunctorToBase(f) => {
                    format!("generators per dimension {:?} over {}", ranks(f.domain()), describe_category(f.base()))
                }
                Input::Diagram(d) => format!("fibers over {}", describe_category(d.base())),
                Input::Functor(f) => {
                    format!("from {} to {}", describe_category(&f.source), describe_category(&f.target))
                }
                Input::Srs(s) => {
                    let conv = if s.is_convergent() { "convergent" } else { "not convergent" };
                    format!("{} letter(s), {} rule(s), {conv}", s.alphabet().len(), s.rules().len())
                }
            };
            println!("ok: {}: {summary}", input.kind());
            Ok(0)
        }
        Command::LambdaHomology { path, up_to, complete, json } => {
            let PolygraphInput { polygraph, complete: declared } = match read(&path)? {
                Input::Polygraph(p) => p,
                Input::Resolved(r) => r.resolution,
                other => return Err(wrong_input(&other, "a polygraph")),
            };
            let groups = polygraphic_homology(&polygraph, up_to, complete || declared)?;
            print_homology(&groups, &lambda(&polygraph)?.complex, json.json);
            Ok(0)
        }
        Command::NerveHomology { path, max_dim, json } => {
            let c = match read(&path)? {
                Input::Category(c) => c,
                Input::Srs(s) => s.monoid(polyhom::compare::NORMAL_FORM_BOUND)?,
                Input::Resolved(r) => r.category,
                other => return Err(wrong_input(&other, "a category")),
            };
            if max_dim == 0 {
                return Err(Error::Capability("a truncation at degree 0 leaves no honest degree".into()));
            }
            let chains = classical_nerve(&c, max_dim).normalized_chains();
            let groups = chains.homology_upto(max_dim - 1, TopDegree::Refuse)?;
            print_homology(&groups, &chains, json.json);
            Ok(0)
        }
        Command::StreetNerve { path, max_dim, check_classical, json } => {
            if max_dim > MAX_ORIENTAL || max_dim == 0 {
                return Err(Error::Capability(format!(
                    "the Street nerve is built for degrees 1 to {MAX_ORIENTAL}, not {max_dim}"
                )));
            }
            let (c2, one) = two_category(read(&path)?)?;
            let nerve = street_nerve(&c2, max_dim)?;
            let chains = nerve.normalized_chains();
            let groups = chains.homology_upto(max_dim - 1, TopDegree::Refuse)?;
            let counts: Vec<usize> = (0..=max_dim).map(|n| nerve.simplices(n).len()).collect();
            let nondeg: Vec<usize> = (0..=max_dim).map(|n| nerve.nondegenerate(n).count()).collect();
            if json.json {
                let v = json!({
                    "simplices": counts,
                    "nondegenerate": nondeg,
                    "chain_complex": ChainComplexJson::from_complex(&chains),
                    "homology": homology_json(&groups),
                });
                println!("{}", pretty(&v));
            } else {
                let line = |v: &[usize]| v.iter().enumerate().map(|(n, k)| format!("N{n}={k}")).collect::<Vec<_>>().join(" ");
                println!("simplices: {}", line(&counts));
                println!("nondegenerate: {}", line(&nondeg));
                println!("{}", homology_line(&groups));
            }
            if check_classical {
                let Some(c) = one else {
                    return Err(Error::invalid("--check-classical needs a 1-category"));
                };
                compare_street_with_classical(&c, max_dim)?;
                if !json.json {
                    println!("agrees with the classical nerve up to degree {max_dim}");
                }
            }
            Ok(0)
        }
        Command::Slice { path, at, json } => {
            let f = match read(&path)? {
                Input::FunctorToBase(f) => f,
                other => return Err(wrong_input(&other, "a functor to a base category")),
            };
            let a = object_id(f.base(), &at)?;
            let s = slice(&f, a)?;
            if json.json {
                println!("{}", pretty(&PolygraphJson::from_polygraph(&s.polygraph, false)));
            } else {
                println!("slice over `{at}`: {} generator(s), per dimension {:?}", s.polygraph.len(), ranks(&s.polygraph));
                print_generators(&s.polygraph);
            }
            Ok(0)
        }
        Command::Reassemble { path, json } => {
            let f = match read(&path)? {
                Input::FunctorToBase(f) => f,
                other => return Err(wrong_input(&other, "a functor to a base category")),
            };
            let r = reassemble(&f)?;
            if json.json {
                println!("{}", pretty(&PolygraphJson::from_polygraph(&r.polygraph, false)));
            } else {
                for (g, class) in r.polygraph.generators().iter().zip(&r.classes) {
                    let members: Vec<String> = class
                        .iter()
                        .map(|(a, id)| format!("{} over {}", id.name, f.base().object_name(*a)))
                        .collect();
                    println!("  {} -> {}: {}", g.id.name, r.to_domain[&g.id].name, members.join(", "));
                }
                println!(
                    "colimit of the slices is isomorphic to the domain ({} generators)",
                    r.polygraph.len()
                );
            }
            Ok(0)
        }
        Command::Conduche { path } => {
            let f = match read(&path)? {
                Input::Functor(f) => f,
                other => return Err(wrong_input(&other, "a functor")),
            };
            match conduche_check(&f.source, &f.target, &f.functor) {
                Ok(()) => {
                    println!("discrete Conduché: yes");
                    Ok(0)
                }
                Err(e) => {
                    println!(
                        "discrete Conduché: no; `{}` = `{}` ∘ `{}` in the target has {} lift(s)",
                        f.source.morphism_name(e.morphism),
                        f.target.morphism_name(e.left),
                        f.target.morphism_name(e.right),
                        e.lifts
                    );
                    Ok(1)
                }
            }
        }
        Command::Grothendieck { path, json } => match read(&path)? {
            Input::Diagram(d) => {
                let g = grothendieck(&d)?;
                let c = colimit(&d)?;
                let q = comparison(&d, &g, &c)?;
                if json.json {
                    let v = json!({
                        "total": CategoryJson::from_category(&g.total),
                        "colimit": CategoryJson::from_category(&c.category),
                    });
                    println!("{}", pretty(&v));
                } else {
                    println!("Grothendieck construction: {}", describe_category(&g.total));
                    println!("colimit: {}", describe_category(&c.category));
                    let onto = c.category.morphism_ids().all(|m| q.morphism_table().contains(&m));
                    println!("comparison functor is {}", if onto { "surjective on morphisms" } else { "not surjective" });
                }
                Ok(0)
            }
            Input::Category(a) => {
                let s = check_slice_identification(&a)?;
                if json.json {
                    println!("{}", pretty(&CategoryJson::from_category(&s.grothendieck.total)));
                } else {
                    println!("diagram a ↦ A/a over {}", describe_category(&a));
                    println!("Grothendieck construction: {}", describe_category(&s.grothendieck.total));
                    println!("colimit: {} (isomorphic to A)", describe_category(&s.colimit.category));
                    println!("projection identifications hold");
                }
                Ok(0)
            }
            other => Err(wrong_input(&other, "a diagram of categories or a category")),
        },
        Command::Resolve { path, depth, json } => {
            let srs = match read(&path)? {
                Input::Srs(s) => s,
                other => return Err(wrong_input(&other, "a rewriting system")),
            };
            if depth > 3 {
                return Err(Error::Capability(format!("resolutions stop at dimension 3, not {depth}")));
            }
            let p = srs.resolution_polygraph(depth)?;
            if json.json {
                println!("{}", pretty(&PolygraphJson::from_polygraph(&p, false)));
            } else {
                println!("resolution truncated at dimension {depth}: generators per dimension {:?}", ranks(&p));
                print_generators(&p);
            }
            Ok(0)
        }
        Command::Compare { path, up_to, pol_only, complete, weight, json } => {
            let input = match read(&path)? {
                Input::Srs(s) => CompareInput::Srs(s),
                Input::Resolved(r) => CompareInput::Resolved(r),
                Input::Polygraph(p) => CompareInput::Polygraph(p),
                other => return Err(wrong_input(&other, "a rewriting system or a category with a resolution")),
            };
            let report = compare(&input, &CompareOptions { up_to, pol_only, complete, weight })?;
            if json.json {
                println!("{}", pretty(&report));
            } else {
                print!("{}", report.to_text());
            }
            Ok(if report.pass { 0 } else { 1 })
        }
    }
}
