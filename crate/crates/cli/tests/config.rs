use heatcorr_cli::config::{parse_str, parse_str_with, Experiment, Overrides};
use heatcorr_grid::Stencil;
use serde_json::{json, Value};

fn minimal() -> Value {
    json!({
        "interaction": {
            "site": { "kind": "pseudoLinearWell", "strength": 1.0 },
            "pair": { "kind": "cosineDiff", "coupling": 0.1 },
            "eps": 0.2
        },
        "lattice": { "chainLength": 1 },
        "schedule": { "t": [0.1], "hbar": 1.0 }
    })
}

fn errors(v: &Value) -> Vec<String> {
    parse_str(&v.to_string()).unwrap_err().0
}

#[test]
fn minimal_config_gets_plumbing_defaults() {
    let cfg = parse_str(&minimal().to_string()).unwrap();
    assert_eq!(cfg.grid.points, 32);
    assert_eq!(cfg.grid.half_width, 6.0);
    assert_eq!(cfg.grid.interior_margin, 6);
    assert_eq!(cfg.grid.stencil, Stencil::ThreePoint);
    assert_eq!(cfg.budget.dense, 5000);
    assert!(cfg.polymer.is_none());
}

#[test]
fn decay_parameter_out_of_range() {
    let mut v = minimal();
    v["interaction"]["eps"] = json!(1.2);
    let e = errors(&v);
    assert!(e.iter().any(|m| m.contains("decay parameter must lie in (0,1)")), "{e:?}");
}

#[test]
fn dense_budget_error_names_the_dimension() {
    let mut v = minimal();
    v["lattice"] = json!({ "chainLength": 8 });
    v["method"] = json!({ "method": "dense" });
    let e = errors(&v);
    assert!(e.iter().any(|m| m.contains("1099511627776") && m.contains("32^8")), "{e:?}");
}

#[test]
fn every_violation_is_reported() {
    let v = json!({ "lattice": { "chainLength": 2 }, "colour": "blue", "grid": { "points": 9, "bogus": 1 } });
    let e = errors(&v);
    for needle in ["unknown key `colour`", "missing required key `interaction`", "missing required key `schedule`", "`grid`"] {
        assert!(e.iter().any(|m| m.contains(needle)), "{needle} not in {e:?}");
    }
    assert!(e.len() >= 4);
}

#[test]
fn supports_must_lie_in_the_lattice_and_be_disjoint() {
    let mut v = minimal();
    v["lattice"] = json!({ "chainLength": 2 });
    v["grid"] = json!({ "points": 9, "interiorMargin": 1 });
    v["supports"] = json!({ "e1": [[0]], "e2": [[0], [5]] });
    let e = errors(&v);
    assert!(e.iter().any(|m| m.contains("outside")), "{e:?}");
    assert!(e.iter().any(|m| m.contains("overlap")), "{e:?}");
}

#[test]
fn experiment_specific_rules() {
    let mut v = minimal();
    v["grid"] = json!({ "points": 12, "interiorMargin": 1 });
    let o = Overrides { experiment: Some(Experiment::Mayer), dense_budget: None };
    let e = parse_str_with(&v.to_string(), &o).unwrap_err().0;
    assert!(e.iter().any(|m| m.contains("odd point count")), "{e:?}");

    v["method"] = json!({ "method": "localQuadrature", "steps": 4 });
    v["grid"]["stencil"] = json!("sineDvr");
    let e = errors(&v);
    assert!(e.iter().any(|m| m.contains("threePoint")), "{e:?}");

    let mut v = minimal();
    v["experiment"] = json!("kernel");
    let o = Overrides { experiment: Some(Experiment::Correlate), dense_budget: None };
    assert!(parse_str_with(&v.to_string(), &o).is_err());
}

#[test]
fn budget_override_applies_before_validation() {
    let mut v = minimal();
    v["lattice"] = json!({ "chainLength": 2 });
    assert!(parse_str(&v.to_string()).is_ok());
    let o = Overrides { experiment: None, dense_budget: Some(100) };
    let e = parse_str_with(&v.to_string(), &o).unwrap_err().0;
    assert!(e.iter().any(|m| m.contains("1024")), "{e:?}");
}

#[test]
fn physics_parameters_have_no_defaults() {
    let mut v = minimal();
    v["schedule"] = json!({ "t": [0.1] });
    assert!(errors(&v).iter().any(|m| m.contains("hbar")));
    let mut v = minimal();
    v["polymer"] = json!({ "delta": 0.5 });
    assert!(errors(&v).iter().any(|m| m.contains("temperature")));
}

#[test]
fn malformed_json_is_a_config_error() {
    assert!(parse_str("{ not json").unwrap_err().0[0].contains("malformed"));
}

#[test]
fn shipped_configs_are_valid() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if let Err(e) = heatcorr_cli::config::parse_config(&path) {
            panic!("{}: {e}", path.display());
        }
        seen += 1;
    }
    assert!(seen >= 5);
}

#[test]
fn committed_schema_is_current() {
    let committed = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/SCHEMA.md")).unwrap();
    assert_eq!(committed, heatcorr_cli::schema::schema_markdown());
}
