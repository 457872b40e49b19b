//! Trains m-TransH and TransH (on star-to-clique triples) over the same
//! planted KB split and prints HIT@10 / mean rank overall and per fold.
//!
//! ```text
//! cargo run --release -p mfold --example planted_ordering -- [seed] [epochs] [learning_rate] [batch_size]
//! ```

use std::time::Instant;

use mfold::dataio::{restrict_to_entities, split};
use mfold::eval::{breakdown_by_fold, evaluate, EvalOptions, Protocol};
use mfold::synthetic::{planted_kb, PlantedConfig};
use mfold::train::{train, TrainConfig, TrainMode};

fn main() -> mfold::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |k: usize, default: &str| args.get(k).cloned().unwrap_or_else(|| default.to_string());
    let seed: u64 = arg(0, "0").parse().expect("seed");
    let epochs: usize = arg(1, "1000").parse().expect("epochs");
    let learning_rate: f64 = arg(2, "0.01").parse().expect("learning rate");
    let batch_size: usize = arg(3, "8").parse().expect("batch size");

    let kb = planted_kb(&PlantedConfig {
        seed,
        ..Default::default()
    })?;
    let data = split(&kb.rep, 0.2, seed)?;
    println!(
        "instances {} (noisy {}), train {} / test {}, triples {} / {}",
        kb.rep.instance_count(),
        kb.noisy,
        data.g.train.instance_count(),
        data.g.test.instance_count(),
        data.g_s2c.train.instance_count(),
        data.g_s2c.test.instance_count()
    );

    for (mode, train_rep, test_rep, protocol) in [
        (TrainMode::MTransH, &data.g.train, &data.g.test, Protocol::Instance),
        (TrainMode::TransHTriple, &data.g_s2c.train, &data.g_s2c.test, Protocol::Triple),
    ] {
        let config = TrainConfig {
            dim: 25,
            epochs,
            learning_rate,
            seed,
            mode,
            batch_size,
            ..Default::default()
        };
        let start = Instant::now();
        let (model, log) = train(train_rep, &config)?;
        let test = restrict_to_entities(test_rep, &train_rep.entities);
        let report = evaluate(&model, &test, protocol, &EvalOptions::default())?;
        let last = log.epochs.last().map_or(f64::NAN, |e| e.loss);
        println!("{report}  final loss {last:.4}  {:.1}s", start.elapsed().as_secs_f64());
        for (fold, m) in breakdown_by_fold(&report)? {
            println!("  J={fold}: HIT@10 {:.2}%  RANK {:.1}  ({})", 100.0 * m.hit_at_10, m.mean_rank, m.queries);
        }
    }
    Ok(())
}
