use std::collections::BTreeSet;
use std::process::Command;

use ldq_core::cli::run;

const SOCIAL: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/social.json");

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ldq(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("ldq").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn summary(stdout: &str) -> Vec<&str> {
    stdout
        .lines()
        .filter(|l| !l.starts_with('⟨') && !l.starts_with('['))
        .collect()
}

fn solution_lines(stdout: &str) -> BTreeSet<String> {
    stdout
        .lines()
        .filter_map(|l| l.find('⟨').map(|i| l[i..].to_owned()))
        .collect()
}

#[test]
fn match_example_prints_one_solution() {
    let o = ldq(&[
        "--web",
        "gen:numbers",
        "--query",
        "(<num:1> <num:succ> ?v)",
        "--semantics",
        "reach",
        "--criterion",
        "match",
        "--seeds",
        "<num:1>",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(
        o.stdout,
        "⟨⟨ ?v → <num:2> ⟩⟩\nstatus=Complete\nsolutions=1\nlookups=2\ndocs=2\n"
    );
    assert!(o.stderr.contains("warning"));
}

#[test]
fn streaming_with_budget_exits_two() {
    let o = ldq(&[
        "--web",
        "gen:numbers",
        "--query",
        "(?x <num:succ> ?y)",
        "--semantics",
        "reach",
        "--criterion",
        "all",
        "--seeds",
        "<num:1>",
        "--budget",
        "5",
        "--mode",
        "stream",
    ]);
    assert_eq!(o.code, 2);
    let tags: Vec<&str> = o
        .stdout
        .lines()
        .filter_map(|l| l.split(' ').next().filter(|t| t.starts_with("[iter=")))
        .collect();
    assert_eq!(
        tags,
        ["[iter=1]", "[iter=2]", "[iter=3]", "[iter=4]", "[iter=5]"]
    );
    assert!(o.stderr.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <num:succ> ?y)",
            "--semantics",
            "reach",
            "--criterion",
            "all",
            "--seeds",
            "",
        ],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <num:succ> ?y)",
            "--semantics",
            "reach",
            "--seeds",
            "<num:1>",
        ],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <num:succ> ?y)",
            "--criterion",
            "all",
        ],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <num:succ> ?y)",
            "--seeds",
            "<num:1>",
        ],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <num:succ> ?y)",
            "--mode",
            "stream",
        ],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <num:succ> ?y)",
            "--budget",
            "unlimited",
        ],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <num:succ> ?y)",
            "--budget",
            "0",
        ],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <num:succ> ?y)",
            "--budget",
            "-3",
        ],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <num:succ> ?y)",
            "--semantics",
            "sideways",
        ],
        &["--web", "gen:numbers", "--query", "(?x <num:succ>"],
        &["--web", "gen:nope", "--query", "(?x <p> ?y)"],
        &["--web", "/does/not/exist.json", "--query", "(?x <p> ?y)"],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <p> ?y)",
            "--semantics",
            "reach",
            "--criterion",
            "u:/missing",
            "--seeds",
            "<a>",
        ],
        &[
            "--web",
            "gen:numbers",
            "--query",
            "(?x <p> ?y)",
            "--semantics",
            "reach",
            "--criterion",
            "all",
            "--seeds",
            "\"lit\"",
        ],
        &["--query", "(?x <p> ?y)"],
    ];
    for args in cases {
        let o = ldq(args);
        assert_eq!(o.code, 1, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}: {}", o.stdout);
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn full_semantics_over_an_infinite_web_needs_a_budget() {
    let o = ldq(&["--web", "gen:numbers", "--query", "(?x <num:succ> ?y)"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.starts_with("error:"), "{}", o.stderr);
    let o = ldq(&[
        "--web",
        "gen:numbers",
        "--query",
        "(?x <num:succ> ?y)",
        "--budget",
        "3",
    ]);
    assert_eq!(o.code, 2);
    assert_eq!(
        summary(&o.stdout),
        [
            "status=BudgetExhausted",
            "solutions=3",
            "lookups=3",
            "docs=3"
        ]
    );
}

#[test]
fn batch_and_stream_print_the_same_set_for_opt_free_queries() {
    for criterion in ["all", "match", "none"] {
        let base = [
            "--web",
            SOCIAL,
            "--query",
            "((?x <knows> ?y) UNION (?y <name> ?n))",
            "--semantics",
            "reach",
            "--criterion",
            criterion,
            "--seeds",
            "<alice>",
        ];
        let batch = ldq(&base);
        let stream = ldq(&[&base[..], &["--mode", "stream"]].concat());
        assert_eq!(batch.code, 0);
        assert_eq!(stream.code, 0);
        assert_eq!(
            solution_lines(&batch.stdout),
            solution_lines(&stream.stdout),
            "{criterion}"
        );
        assert_eq!(
            summary(&batch.stdout),
            summary(&stream.stdout),
            "{criterion}"
        );
    }
}

#[test]
fn streaming_an_opt_query_warns_and_covers_the_batch_result() {
    let base = [
        "--web",
        SOCIAL,
        "--query",
        "((?x <knows> ?y) OPT (?y <name> ?n))",
        "--semantics",
        "reach",
        "--criterion",
        "all",
        "--seeds",
        "<alice>",
        "--budget",
        "100",
    ];
    let batch = ldq(&base);
    let stream = ldq(&[&base[..], &["--mode", "stream"]].concat());
    assert_eq!((batch.code, stream.code), (0, 0));
    assert!(solution_lines(&batch.stdout).is_subset(&solution_lines(&stream.stdout)));
    assert!(stream.stderr.contains("OPT"), "{}", stream.stderr);
    assert!(!batch.stderr.contains("OPT"));
}

#[test]
fn query_and_seeds_can_come_from_files() {
    let dir = std::env::temp_dir().join(format!("ldq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let query = dir.join("query.rq");
    let seeds = dir.join("seeds.txt");
    std::fs::write(
        &query,
        "# names of known people\n((<alice> <knows> ?y) AND (?y <name> ?n))\n",
    )
    .unwrap();
    std::fs::write(&seeds, "# start here\n<alice>\n\n").unwrap();
    let o = ldq(&[
        "--web",
        SOCIAL,
        "--query",
        query.to_str().unwrap(),
        "--semantics",
        "reach",
        "--criterion",
        "match",
        "--seeds-file",
        seeds.to_str().unwrap(),
    ]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(
        summary(&o.stdout),
        ["status=Complete", "solutions=2", "lookups=3", "docs=3"]
    );
}

#[test]
fn help_and_version_exit_zero() {
    let o = ldq(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("--semantics"));
    assert_eq!(ldq(&["--version"]).code, 0);
}

#[test]
fn binary_colors_errors_on_request() {
    let bin = env!("CARGO_BIN_EXE_ldq");
    let args = ["--web", "gen:nope", "--query", "(?x <p> ?y)"];
    let plain = Command::new(bin)
        .args(args)
        .env("LDQ_COLOR", "0")
        .output()
        .unwrap();
    let colored = Command::new(bin)
        .args(args)
        .env("LDQ_COLOR", "1")
        .output()
        .unwrap();
    assert_eq!(plain.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&plain.stderr).starts_with("error:"));
    assert!(String::from_utf8_lossy(&colored.stderr).starts_with("\u{1b}[31merror:"));
}
