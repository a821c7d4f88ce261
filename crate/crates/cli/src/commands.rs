use std::fs;

use relhom::ages::{
    age, age_projects, check_class_property, csp_equivalent, hom_precedes, ClassProperty, PrecedenceWitness,
    VerdictOutcome,
};
use relhom::cores::{
    expand_by_types_with, finite_core, is_core, is_hom_irreducible, pe_type_classes, saturate, type_classes,
    ExpansionOptions,
};
use relhom::homsearch::{count_maps, homogeneity_check, search_map, Decision};
use relhom::limits::{build_core_approx, build_limit, konig_hom, verify_extension_property, KonigOutcome, LimitMode};
use relhom::{check_partial_map, HomogeneityKind, Mode, PartialMap, Structure};

use crate::input::{check_size, load_class, load_file, load_structure, parse_pairs, parse_tuple};
use crate::report::Report;
use crate::{
    ClassCommand, Cli, Command, CoreCommand, Failure, HomCommand, HomogCommand, KindArg, LimitCommand, LimitModeArg,
    ModeArg, OrderArg, PropArg, EXIT_FAILS, EXIT_HOLDS, EXIT_INCONCLUSIVE,
};

type Outcome = Result<(u8, Report), Failure>;

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Hom => Mode::Hom,
        ModeArg::Mono => Mode::Mono,
        ModeArg::Embed => Mode::Embedding,
        ModeArg::Iso => Mode::Iso,
    }
}

fn tuple_names(s: &Structure, t: &[usize]) -> String {
    let names: Vec<&str> = t.iter().map(|&x| s.element(x)).collect();
    format!("({})", names.join(","))
}

fn decision<W>(d: &Decision<W>) -> (u8, &'static str) {
    match d {
        Decision::Yes => (EXIT_HOLDS, "yes"),
        Decision::No(_) => (EXIT_FAILS, "no"),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let max = cli.max_elements;
    let load = |r: &str| load_structure(r, max);
    match &cli.command {
        Command::Hom(HomCommand::Find { a, b, mode: m, seed }) => {
            let (a, b) = (load(a)?, load(b)?);
            let m = mode(*m);
            let seed = match seed {
                Some(text) => PartialMap::from_named(&a, &b, &parse_pairs(text)?)?,
                None => PartialMap::empty(a.len(), b.len()),
            };
            let mut r;
            let found = if check_partial_map(&a, &b, &seed, m)? {
                search_map(&a, &b, m, &seed)?.into_map()
            } else {
                None
            };
            let code = match found {
                Some(f) => {
                    r = Report::new("found");
                    r.field("map", f.describe(&a, &b));
                    EXIT_HOLDS
                }
                None => {
                    r = Report::new("not-found");
                    EXIT_FAILS
                }
            };
            r.field("mode", m.as_str()).field("source", a.name()).field("target", b.name());
            Ok((code, r))
        }
        Command::Hom(HomCommand::Count { a, b, mode: m }) => {
            let (a, b) = (load(a)?, load(b)?);
            let n = count_maps(&a, &b, mode(*m))?;
            let mut r = Report::new(if n > 0 { "found" } else { "not-found" });
            r.field("count", n).field("mode", mode(*m).as_str());
            Ok((if n > 0 { EXIT_HOLDS } else { EXIT_FAILS }, r))
        }
        Command::Homog(HomogCommand::Check { structure, kind }) => {
            let a = load(structure)?;
            let k = match kind {
                KindArg::Hom => HomogeneityKind::Hom,
                KindArg::Iso => HomogeneityKind::Iso,
            };
            let d = homogeneity_check(&a, k)?;
            let (code, word) = decision(&d);
            let mut r = Report::new(word);
            r.field("kind", if k == HomogeneityKind::Hom { "hom" } else { "iso" });
            if let Decision::No(f) = &d {
                r.field("local-map", f.describe(&a, &a));
            }
            Ok((code, r))
        }
        Command::Age { structure, max: n } => {
            let a = load(structure)?;
            let members = age(&a, *n)?;
            let mut r = Report::new("ok");
            r.field("members", members.len());
            for m in members {
                r.structure(m);
            }
            Ok((EXIT_HOLDS, r))
        }
        Command::Core(args) => match (&args.check, &args.structure) {
            (Some(CoreCommand::Check { structure }), _) => {
                let a = load(structure)?;
                let d = is_core(&a)?;
                let (code, word) = decision(&d);
                let mut r = Report::new(word);
                if let Decision::No(e) = &d {
                    r.field("endomorphism", e.describe(&a, &a));
                }
                Ok((code, r))
            }
            (None, Some(structure)) => {
                let a = load(structure)?;
                let ret = finite_core(&a)?;
                let mut r = Report::new("found");
                r.field("size", ret.image.len()).field("retraction", ret.map.describe(&a, &a));
                r.structure(ret.image.with_name(format!("core_{}", a.name())));
                Ok((EXIT_HOLDS, r))
            }
            (None, None) => Err(Failure::Usage("core needs a structure".into())),
        },
        Command::Irr { structure, class, bound } => {
            let a = load(structure)?;
            let c = load_class(class, max)?;
            let d = is_hom_irreducible(&a, &c, *bound)?;
            let (code, word) = decision(&d);
            let mut r = Report::new(word);
            r.field("class", c.describe());
            if let Decision::No(w) = d {
                let target = w.target.with_name("target");
                r.field("map", w.map.describe(&a, &target));
                r.structure(target);
            }
            Ok((code, r))
        }
        Command::Saturate { structure, tuple } => {
            let a = load(structure)?;
            let t = parse_tuple(&a, tuple)?;
            let (top, e) = saturate(&a, &t)?;
            let mut r = Report::new("found");
            r.field("tuple", tuple_names(&a, &t))
                .field("maximal", tuple_names(&a, &top))
                .field("map", e.describe(&a, &a));
            Ok((EXIT_HOLDS, r))
        }
        Command::Types { structure, arity, order } => {
            let a = load(structure)?;
            let o = match order {
                OrderArg::Local => type_classes(&a, *arity)?,
                OrderArg::Endo => pe_type_classes(&a, *arity)?,
            };
            let mut r = Report::new("ok");
            r.field("classes", o.len());
            for (c, tuples) in o.classes.iter().enumerate() {
                let list: Vec<String> = tuples.iter().map(|t| tuple_names(&a, t)).collect();
                let above: Vec<String> = o.above(c).iter().map(|d| d.to_string()).collect();
                r.field(
                    &format!("class{c}"),
                    format!(
                        "{} maximal={} above=[{}]",
                        list.join(" "),
                        o.maximal[c],
                        above.join(",")
                    ),
                );
            }
            r.field("up-sets", o.up_set_count());
            Ok((EXIT_HOLDS, r))
        }
        Command::Expand { structure, arity, all_up_sets } => {
            let a = load(structure)?;
            let opts = ExpansionOptions {
                all_up_sets: *all_up_sets,
                ..ExpansionOptions::default()
            };
            let e = expand_by_types_with(&a, *arity, opts)?;
            let mut r = Report::new("ok");
            r.field("symbols", e.signature().len());
            r.structure(e);
            Ok((EXIT_HOLDS, r))
        }
        Command::Class(ClassCommand::Check { class, prop, size, amalgam }) => {
            let c = load_class(class, max)?;
            let p = match prop {
                PropArg::Hp => ClassProperty::Hp,
                PropArg::Jep => ClassProperty::Jep,
                PropArg::Ap => ClassProperty::Ap,
                PropArg::Hap => ClassProperty::Hap,
            };
            let v = check_class_property(&c, p, *size, *amalgam)?;
            let (code, mut r) = match &v.outcome {
                VerdictOutcome::Holds => (EXIT_HOLDS, Report::new("holds")),
                VerdictOutcome::Fails(config) => {
                    let mut r = Report::new("fails");
                    for line in config.describe_maps() {
                        let (k, v) = line.split_once(": ").unwrap_or(("map", &line));
                        r.field(k, v);
                    }
                    for s in config.structures() {
                        r.structure(s);
                    }
                    (EXIT_FAILS, r)
                }
                VerdictOutcome::Inconclusive(configs) => {
                    let mut r = Report::new("inconclusive");
                    r.field("open-configurations", configs.len());
                    if let Some(first) = configs.first() {
                        for line in first.describe_maps() {
                            let (k, v) = line.split_once(": ").unwrap_or(("map", &line));
                            r.field(k, v);
                        }
                        for s in first.structures() {
                            r.structure(s);
                        }
                    }
                    (EXIT_INCONCLUSIVE, r)
                }
            };
            r.field("class", c.describe())
                .field("property", p)
                .field("size", v.size_bound)
                .field("amalgam", v.amalgam_bound);
            Ok((code, r))
        }
        Command::Project { class_a, class_b, size } => {
            let (ca, cb) = (load_class(class_a, max)?, load_class(class_b, max)?);
            let d = age_projects(&ca, &cb, *size)?;
            let (code, word) = decision(&d);
            let mut r = Report::new(word);
            if let Decision::No(w) = d {
                r.structure(w.with_name("witness"));
            }
            Ok((code, r))
        }
        Command::Precedes { h, h2, size } => {
            let (h, h2) = (load(h)?, load(h2)?);
            let d = hom_precedes(&h, &h2, *size)?;
            let (code, word) = decision(&d);
            let mut r = Report::new(word);
            match d {
                Decision::Yes => {}
                Decision::No(PrecedenceWitness::NotEmbedded(s)) => {
                    r.field("reason", "not-embedded");
                    r.structure(s.with_name("witness"));
                }
                Decision::No(PrecedenceWitness::NoExtension { a, b, map }) => {
                    r.field("reason", "no-extension")
                        .field("a", tuple_names(&h, &a))
                        .field("b", tuple_names(&h, &b))
                        .field("map", map.describe(&h, &h2));
                }
            }
            Ok((code, r))
        }
        Command::Cspeq { a, b, size } => {
            let (a, b) = (load(a)?, load(b)?);
            let d = csp_equivalent(&a, &b, *size)?;
            let (code, word) = decision(&d);
            let mut r = Report::new(word);
            if let Decision::No(w) = d {
                r.structure(w.with_name("witness"));
            }
            Ok((code, r))
        }
        Command::Limit(LimitCommand::Build { class, steps, mode: m, seed_bound, log }) => {
            let c = load_class(class, max)?;
            let m = match m {
                LimitModeArg::Hap => LimitMode::Hap,
                LimitModeArg::Ap => LimitMode::Ap,
            };
            let state = build_limit(&c, *steps, m, *seed_bound)?;
            let h = state.last().clone();
            check_size(&h, max)?;
            let mut r = Report::new("ok");
            r.field("class", &state.class)
                .field("mode", m)
                .field("stages", state.stages.len() - 1)
                .field("size", h.len());
            match log {
                Some(path) => {
                    fs::write(path, state.log_text())
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    r.field("log", path.display());
                }
                None => {
                    for line in &state.log {
                        r.field("log", line);
                    }
                }
            }
            r.structure(h.with_name("H"));
            Ok((EXIT_HOLDS, r))
        }
        Command::Limit(LimitCommand::Verify { h, class, size }) => {
            let h = load(h)?;
            let c = load_class(class, max)?;
            let d = verify_extension_property(&h, &c, *size)?;
            let (code, word) = decision(&d);
            let mut r = Report::new(word);
            if let Decision::No(w) = d {
                let a = w.pair.a.clone().with_name("A");
                let b = w.pair.b.clone().with_name("B");
                r.field("inclusion", w.pair.inclusion().describe(&a, &b))
                    .field("map", w.f.describe(&a, &h));
                r.structure(a).structure(b);
            }
            Ok((code, r))
        }
        Command::Konig { chain, target, depth } => {
            let file = load_file(chain)?;
            for s in &file.structures {
                check_size(s, max)?;
            }
            let b = load(target)?;
            let d = depth.unwrap_or(file.structures.len());
            match konig_hom(&file.structures, &b, d)? {
                KonigOutcome::Branch { tree, classes, maps } => {
                    let mut r = Report::new("branch");
                    let sizes: Vec<String> = tree.levels.iter().map(|l| l.len().to_string()).collect();
                    let path: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
                    r.field("classes-per-level", sizes.join(",")).field("branch", path.join(","));
                    for (t, m) in maps.iter().enumerate() {
                        r.field(&format!("level{}", t + 1), m.describe(&file.structures[t], &b));
                    }
                    Ok((EXIT_HOLDS, r))
                }
                KonigOutcome::Empty { level, tree } => {
                    let mut r = Report::new("empty");
                    let sizes: Vec<String> = tree.levels.iter().map(|l| l.len().to_string()).collect();
                    r.field("level", level).field("classes-per-level", sizes.join(","));
                    Ok((EXIT_FAILS, r))
                }
            }
        }
        Command::Coreapprox { structure, steps } => {
            let a = load(structure)?;
            let (f, report) = build_core_approx(&a, *steps)?;
            let mut r = Report::new("ok");
            r.field("hom-homogeneous", report.hom_homogeneous)
                .field("irreducibles", report.irreducibles.len())
                .field("hp", report.hp.outcome_word())
                .field("ap", report.ap.outcome_word())
                .field("age-projects", report.projects)
                .field("hom-equivalent", report.hom_equivalent)
                .field("age-matches", report.age_matches)
                .field("size", f.len());
            for line in &report.chain.log {
                r.field("log", line);
            }
            r.structure(f.with_name("F"));
            Ok((EXIT_HOLDS, r))
        }
    }
}
