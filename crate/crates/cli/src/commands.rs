use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use mfold::convert::{convert_fact_rep, recover_facts, s2c_collision_witness, s2c_representation, IdMode};
use mfold::dataio::{
    check_counts, filter_pipeline, format_facts, format_instances_keyed, format_model, load_model,
    parse_facts, parse_instances, parse_instances_with_roles, parse_role_order, restrict_to_entities, split,
    write_text, FilterOptions, InstanceFormat, JF17K_TEST, JF17K_TRAIN, MODEL_FORMAT_VERSION,
};
use mfold::eval::{evaluate, EvalOptions, Protocol, Sampling, TieRule};
use mfold::train::{train_with_observer, TrainConfig, TrainMode};
use mfold::{Error, FactRepresentation, InstanceRepresentation, Result, Stats};

use crate::{
    Cli, Command, ConvertArgs, ConvertMode, EvalArgs, InputArgs, InputKind, ModeArg, ProtocolArg, SplitArgs,
    StatsArgs, StrictCounts, TieArg, TrainArgs, WitnessArgs,
};

struct Paths {
    data_dir: Option<PathBuf>,
}

impl Paths {
    fn resolve(&self, path: &Path) -> PathBuf {
        match &self.data_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let paths = Paths { data_dir: cli.data_dir };
    match cli.command {
        Command::Stats(args) => stats(&paths, args),
        Command::Convert(args) => convert(&paths, args),
        Command::Split(args) => split_cmd(&paths, args),
        Command::Train(args) => train(&paths, args),
        Command::Eval(args) => eval(&paths, args),
        Command::Witness(args) => witness(&paths, args),
    }
}

/// Reproducibility block written at the top of every output.
fn header(command: &str, settings: &[(&str, String)]) -> String {
    let mut out = format!(
        "# mfold {} {command}\n# formats instances=1 facts=1 model={MODEL_FORMAT_VERSION} report=1\n",
        env!("CARGO_PKG_VERSION")
    );
    for (key, value) in settings {
        let _ = writeln!(out, "# {key} {value}");
    }
    out
}

fn write_output(path: &Path, header: &str, body: &str) -> Result<()> {
    write_text(path, &format!("{header}{body}"))
}

fn load_instances(paths: &Paths, input: &InputArgs) -> Result<InstanceRepresentation> {
    let path = paths.resolve(&input.input);
    let parsed = match input.format {
        InputKind::Keyed => parse_instances(&path, InstanceFormat::Keyed)?,
        InputKind::Positional => match &input.schema {
            Some(schema) => parse_instances_with_roles(&path, &parse_role_order(&paths.resolve(schema))?)?,
            None => parse_instances(&path, InstanceFormat::Positional)?,
        },
        InputKind::Facts => {
            return Err(Error::Config(format!("{} must be an instance file for this command", path.display())))
        }
    };
    if parsed.duplicates > 0 {
        eprintln!("warning: {}: {} duplicate lines ignored", path.display(), parsed.duplicates);
    }
    Ok(parsed.rep)
}

fn load_facts(paths: &Paths, input: &InputArgs) -> Result<FactRepresentation> {
    parse_facts(&paths.resolve(&input.input))
}

fn stats(paths: &Paths, args: StatsArgs) -> Result<()> {
    let stats = if args.input.format == InputKind::Facts {
        if args.strict.is_some() {
            return Err(Error::Config("--strict applies to instance files".into()));
        }
        load_facts(paths, &args.input)?.stats()
    } else {
        let rep = load_instances(paths, &args.input)?;
        if let Some(strict) = args.strict {
            check_counts(
                &rep,
                match strict {
                    StrictCounts::Jf17kTrain => &JF17K_TRAIN,
                    StrictCounts::Jf17kTest => &JF17K_TEST,
                },
            )?;
        }
        rep.stats()
    };
    print!("{}{stats}", header("stats", &[("input", args.input.input.display().to_string())]));
    Ok(())
}

fn stats_delta(before: &Stats, after: &Stats) -> String {
    let rows = |s: &Stats| -> Vec<(String, usize)> {
        let mut v = vec![
            ("entities".to_string(), s.entity_count),
            ("relation_types".to_string(), s.rel_type_count),
            ("instances".to_string(), s.instance_count),
        ];
        v.extend(s.fold_histogram.iter().map(|(f, n)| (format!("fold_{f}"), *n)));
        v
    };
    let (b, a) = (rows(before), rows(after));
    let keys: BTreeSet<&String> = b.iter().chain(&a).map(|(k, _)| k).collect();
    let lookup = |v: &[(String, usize)], k: &str| v.iter().find(|(x, _)| x == k).map_or(0, |(_, n)| *n);
    let mut out = String::from("stat\tbefore\tafter\n");
    for key in ["entities", "relation_types", "instances"] {
        let _ = writeln!(out, "{key}\t{}\t{}", lookup(&b, key), lookup(&a, key));
    }
    for key in keys.into_iter().filter(|k| k.starts_with("fold_")) {
        let _ = writeln!(out, "{key}\t{}\t{}", lookup(&b, key), lookup(&a, key));
    }
    out
}

fn convert(paths: &Paths, args: ConvertArgs) -> Result<()> {
    if args.collapse_degenerate && args.mode != ConvertMode::TId {
        return Err(Error::Config("--collapse-degenerate only applies to --mode t-id".into()));
    }
    let mode_name = match args.mode {
        ConvertMode::T => "t",
        ConvertMode::TId => "t-id",
        ConvertMode::S2c => "s2c",
        ConvertMode::Recover => "recover",
    };
    let (before, after, body) = match args.mode {
        ConvertMode::T | ConvertMode::TId => {
            let facts = load_facts(paths, &args.input)?;
            let id_mode = match (args.mode, args.collapse_degenerate) {
                (ConvertMode::T, _) => IdMode::Drop,
                (_, false) => IdMode::Keep,
                (_, true) => IdMode::KeepCollapsingDegenerate,
            };
            let rep = convert_fact_rep(&facts, id_mode);
            (facts.stats(), rep.stats(), format_instances_keyed(&rep))
        }
        ConvertMode::S2c => {
            let rep = load_instances(paths, &args.input)?;
            let triples = s2c_representation(&rep);
            (rep.stats(), triples.stats(), format_instances_keyed(&triples))
        }
        ConvertMode::Recover => {
            let rep = load_instances(paths, &args.input)?;
            if !rep.schemas.values().any(|s| s.has_fact_id()) {
                return Err(Error::Data(format!(
                    "{} carries no FACT-ID role; nothing to recover",
                    args.input.input.display()
                )));
            }
            let facts = recover_facts(&rep)?;
            (rep.stats(), facts.stats(), format_facts(&facts))
        }
    };
    let head = header(
        "convert",
        &[
            ("mode", mode_name.to_string()),
            ("input", args.input.input.display().to_string()),
        ],
    );
    write_output(&paths.resolve(&args.output), &head, &body)?;
    print!("{head}{}", stats_delta(&before, &after));
    Ok(())
}

fn split_cmd(paths: &Paths, args: SplitArgs) -> Result<()> {
    let options = FilterOptions {
        min_entity_instances: args.min_entity_instances,
        max_facts_per_type: args.max_facts_per_type,
        drop_single_role: !args.keep_single_role,
        seed: args.seed,
    };
    let g_id = if args.input.format == InputKind::Facts {
        let facts = load_facts(paths, &args.input)?;
        let filtered = filter_pipeline(&facts, &options);
        eprintln!(
            "filter: dropped {} single-role facts, {} by the per-type cap, {} degree rounds",
            filtered.dropped_single_role_facts, filtered.dropped_by_cap, filtered.degree_rounds
        );
        filtered.g_id
    } else {
        load_instances(paths, &args.input)?
    };
    let out = split(&g_id, args.test_fraction, args.seed)?;
    let dir = paths.resolve(&args.out_dir);
    fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let head = header(
        "split",
        &[
            ("input", args.input.input.display().to_string()),
            ("seed", args.seed.to_string()),
            ("test_fraction", args.test_fraction.to_string()),
            ("min_entity_instances", args.min_entity_instances.to_string()),
            ("max_facts_per_type", args.max_facts_per_type.to_string()),
            ("drop_single_role", (!args.keep_single_role).to_string()),
        ],
    );
    let mut summary = String::from("variant\tside\tentities\trelation_types\titems\n");
    for (name, bundle) in [("g_id", &out.g_id), ("g", &out.g), ("g_s2c", &out.g_s2c)] {
        for (side, rep) in [("train", &bundle.train), ("test", &bundle.test)] {
            write_output(&dir.join(format!("{name}_{side}.tsv")), &head, &format_instances_keyed(rep))?;
            let s = rep.stats();
            let _ = writeln!(
                summary,
                "{name}\t{side}\t{}\t{}\t{}",
                s.entity_count, s.rel_type_count, s.instance_count
            );
        }
    }
    let _ = writeln!(summary, "realized_test_fraction\t{}", out.realized_fraction);
    let _ = writeln!(summary, "moved_to_train\t{}", out.moved_to_train);
    print!("{head}{summary}");
    Ok(())
}

fn effective_config(paths: &Paths, args: &TrainArgs) -> Result<TrainConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let path = paths.resolve(path);
            let text = fs::read_to_string(&path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => TrainConfig::default(),
    };
    if let Some(mode) = args.mode {
        config.mode = match mode {
            ModeArg::TranshTriple => TrainMode::TransHTriple,
            ModeArg::MTransh => TrainMode::MTransH,
            ModeArg::MTranshId => TrainMode::MTransHId,
        };
    }
    macro_rules! overlay {
        ($($field:ident),*) => {$(
            if let Some(v) = args.$field {
                config.$field = v;
            }
        )*};
    }
    overlay!(dim, margin, learning_rate, epochs, batch_size, penalty_weight, seed);
    config.strict_constraints |= args.strict_constraints;
    config.freeze_weights |= args.freeze_weights;
    config.reject_known_positives |= args.reject_known_positives;
    config.validate()?;
    Ok(config)
}

fn train(paths: &Paths, args: TrainArgs) -> Result<()> {
    let config = effective_config(paths, &args)?;
    let echo = toml::to_string(&config).map_err(|e| Error::Config(e.to_string()))?;
    eprint!("# effective config\n{echo}");
    let rep = load_instances(paths, &args.input)?;

    let mut log_text = String::new();
    let (model, log) = train_with_observer(&rep, &config, |record, _| {
        if args.log.is_some() {
            let _ = writeln!(log_text, "{record}");
        } else {
            eprintln!("{record}");
        }
    })?;
    for event in &log.events {
        eprintln!("warning: {event}");
    }
    if !model.is_finite() {
        return Err(Error::NonFinite("trained parameters".into()));
    }
    let settings = [
        ("seed", config.seed.to_string()),
        ("config", config.canonical()),
        ("input", args.input.input.display().to_string()),
    ];
    if let Some(path) = &args.log {
        let mut head = header("train", &settings);
        for event in &log.events {
            let _ = writeln!(head, "# event {event}");
        }
        write_output(&paths.resolve(path), &head, &log_text)?;
    }
    let head = header("train", &settings);
    write_output(
        &paths.resolve(&args.output),
        &head,
        &format_model(&model, Some(&config.digest())),
    )?;
    print!(
        "{head}entities\t{}\nrelations\t{}\nepochs\t{}\nfinal_loss\t{}\n",
        model.embedding().len(),
        model.relations().len(),
        log.epochs.len(),
        log.epochs.last().map_or(f64::NAN, |e| e.loss)
    );
    Ok(())
}

fn eval(paths: &Paths, args: EvalArgs) -> Result<()> {
    let saved = load_model(&paths.resolve(&args.model))?;
    let model = saved.model;
    let mut test = load_instances(paths, &args.input)?;
    if args.skip_unknown {
        let known: BTreeSet<_> = model.embedding().names().iter().cloned().collect();
        let before = test.instance_count();
        test = restrict_to_entities(&test, &known);
        eprintln!("skipped {} test items with unknown entities", before - test.instance_count());
    }
    let protocol = match args.protocol {
        ProtocolArg::Triple => Protocol::Triple,
        ProtocolArg::Instance => Protocol::Instance,
        ProtocolArg::InstanceId => Protocol::InstanceId,
    };
    let options = EvalOptions {
        tie: match args.tie {
            TieArg::Optimistic => TieRule::Optimistic,
            TieArg::Pessimistic => TieRule::Pessimistic,
        },
        sampling: args.sample_fraction.map(|fraction| Sampling {
            fraction,
            seed: args.sample_seed,
        }),
        threads: args.threads,
    };
    let report = evaluate(&model, &test, protocol, &options)?;
    eprintln!("{report}");
    let head = header(
        "eval",
        &[
            ("model", args.model.display().to_string()),
            ("model_config", saved.config_digest.unwrap_or_else(|| "-".into())),
            ("test", args.input.input.display().to_string()),
        ],
    );
    let body = report.export();
    match &args.output {
        Some(path) => write_output(&paths.resolve(path), &head, &body),
        None => {
            print!("{head}{body}");
            Ok(())
        }
    }
}

fn witness(paths: &Paths, args: WitnessArgs) -> Result<()> {
    let (g1, g2) = s2c_collision_witness();
    let (s1, s2) = (s2c_representation(&g1), s2c_representation(&g2));
    let head = header("witness", &[]);
    let mut summary = format!(
        "g1_instances\t{}\ng2_instances\t{}\ndistinct\t{}\nsame_s2c\t{}\ns2c_triples\t{}\n",
        g1.instance_count(),
        g2.instance_count(),
        g1 != g2,
        s1 == s2,
        s1.instance_count()
    );
    match &args.out_dir {
        Some(dir) => {
            let dir = paths.resolve(dir);
            fs::create_dir_all(&dir).map_err(|e| Error::Io {
                path: dir.clone(),
                source: e,
            })?;
            for (name, rep) in [("g1", &g1), ("g2", &g2), ("s2c", &s1)] {
                write_output(&dir.join(format!("{name}.tsv")), &head, &format_instances_keyed(rep))?;
            }
        }
        None => {
            for (name, rep) in [("g1", &g1), ("g2", &g2), ("s2c", &s1)] {
                let _ = write!(summary, "\n# {name}\n{}", format_instances_keyed(rep));
            }
        }
    }
    print!("{head}{summary}");
    Ok(())
}
