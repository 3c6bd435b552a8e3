//! Drives the `divisum` CLI in-process: the same reproducible batch
//! experiments the binary exposes, with CSV on stdout.
//!
//! ```bash
//! cargo run --release --example cli_experiments
//! ```

fn main() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["divisum", "gap-bounds", "--b", "4", "--rmax", "4"],
        vec![
            "divisum", "lemma", "4exact", "--r", "3", "--k", "2", "--j", "1", "--format", "json",
        ],
        vec![
            "divisum", "correlate", "--shifts", "0", "--powers", "3", "--n", "1000000",
            "--r-exp", "0.15",
        ],
        vec![
            "divisum", "series", "--jvec", "0,2,6", "--exact", "--samples", "25", "--seed", "7",
        ],
        vec![
            "divisum", "moments", "--n", "1000000", "--lambda", "1", "--k", "2", "--source",
            "psir", "--theta", "0.4",
        ],
        vec!["divisum", "gap-hist", "--n", "500000", "--lambda", "1", "--xi", "1"],
    ];
    for args in runs {
        println!("$ {}", args.join(" "));
        let code = divisum::cli::run(args);
        assert_eq!(code, 0);
        println!();
    }
}
