//! Column layout of every CSV table the CLI emits.

pub struct TableSchema {
    pub file: &'static str,
    pub experiment: &'static str,
    pub about: &'static str,
    pub columns: &'static [(&'static str, &'static str)],
}

pub const TABLES: &[TableSchema] = &[
    TableSchema {
        file: "kernel_gradient.csv",
        experiment: "kernel",
        about: "Phase extraction and the gradient bound, one row per time.",
        columns: &[
            ("t", "inverse temperature"),
            ("validPoints", "grid pairs (x, y) where the phase is trusted"),
            ("supPsi", "sup |psi| over trusted points"),
            ("gradientSup", "sup over sites of |grad_(x_l, y_l) psi|"),
            ("m1", "hypothesis constant M1 of the interaction"),
            ("timeScale", "admissible time scale T0 / hbar"),
            ("gradientBound", "1.1 t M1"),
            ("checked", "1 when t <= 0.5 T0 / hbar, so the bound is enforced"),
            ("withinBound", "1 when gradientSup <= gradientBound"),
        ],
    },
    TableSchema {
        file: "kernel_slice.csv",
        experiment: "kernel",
        about: "Phase psi(x, y0) at the grid centre y0, one row per trusted x and time.",
        columns: &[
            ("t", "inverse temperature"),
            ("x", "configuration x, site coordinates joined by ';'"),
            ("u", "kernel value U(x, y0)"),
            ("psi", "phase psi(x, y0)"),
        ],
    },
    TableSchema {
        file: "decompose_terms.csv",
        experiment: "decompose",
        about: "Sup norm of each box term T_Q psi of the doubled decomposition.",
        columns: &[
            ("lo", "lower corner of Q, coordinates joined by ';'"),
            ("hi", "upper corner of Q"),
            ("diam", "diameter of Q"),
            ("supNorm", "sup |T_Q psi| over trusted points"),
        ],
    },
    TableSchema {
        file: "decompose_profile.csv",
        experiment: "decompose",
        about: "Largest term sup norm per diameter.",
        columns: &[
            ("diam", "box diameter"),
            ("supNorm", "largest sup norm among boxes of this diameter"),
            ("normalized", "supNorm / (t eps^diam (1 + diam)^(2d))"),
            ("boxes", "number of boxes of this diameter"),
        ],
    },
    TableSchema {
        file: "decompose_telescoping.csv",
        experiment: "decompose",
        about: "Defect of psi(x, y) - psi(0, y - x) = sum_Q T_Q psi(x, y).",
        columns: &[
            ("t", "inverse temperature"),
            ("supDefect", "sup of the defect over points where every term is defined"),
            ("points", "number of such points"),
        ],
    },
    TableSchema {
        file: "mayer_factors.csv",
        experiment: "mayer",
        about: "Mayer factors per non-point box.",
        columns: &[
            ("lo", "lower corner of Q"),
            ("hi", "upper corner of Q"),
            ("diam", "diameter of Q"),
            ("mQ", "M_Q, twice the sup of T_Q psi"),
            ("supF", "sup of f_Q = exp(M_Q - T_Q psi~) - 1"),
        ],
    },
    TableSchema {
        file: "mayer_reconstruction.csv",
        experiment: "mayer",
        about: "Sum over families of K_Gamma against the doubled kernel.",
        columns: &[
            ("families", "number of box families summed"),
            ("points", "doubled points where every factor is defined"),
            ("maxRelativeError", "sup |sum K_Gamma - U~| / U~"),
        ],
    },
    TableSchema {
        file: "mayer_cancellation.csv",
        experiment: "mayer",
        about: "Signed group sums of K_Gamma on diagonal points for non-connecting families.",
        columns: &[
            ("e1", "first support, sites joined by ';'"),
            ("e2", "second support"),
            ("family", "boxes of Gamma as lo:hi joined by ' ', empty for the empty family"),
            ("signedSum", "largest |sum_sigma sgn(sigma) K_Gamma(sigma X)|"),
            ("scale", "largest K_Gamma seen"),
            ("relative", "signedSum / scale"),
        ],
    },
    TableSchema {
        file: "mayer_polymer.csv",
        experiment: "mayer",
        about: "Brute-force polymer weight sums against the closed-form bound.",
        columns: &[
            ("distance", "sup-norm distance between the supports"),
            ("polymers", "number of enumerated polymers"),
            ("lhsSum", "sum of polymer weights"),
            ("rhsBound", "closed-form bound"),
            ("margin", "rhsBound - lhsSum"),
            ("admissible", "1 when the temperature lies below the admissible threshold"),
        ],
    },
    TableSchema {
        file: "correlate_covariance.csv",
        experiment: "correlate",
        about: "Covariance of the first observable at site 0 with the second at site r.",
        columns: &[
            ("t", "inverse temperature"),
            ("distance", "r"),
            ("covariance", "Gibbs covariance"),
            ("doubledCovariance", "doubled-trace covariance (dense method only, else empty)"),
            ("zeroClass", "1 when |covariance| is below the zero floor"),
        ],
    },
    TableSchema {
        file: "correlate_fit.csv",
        experiment: "correlate",
        about: "Exponential fit |Cov| ~ C delta^r per time.",
        columns: &[
            ("t", "inverse temperature"),
            ("status", "fitted, decoupled or tooFewPoints"),
            ("fittedDelta", "fitted decay rate (empty unless fitted)"),
            ("r2", "coefficient of determination of the log-linear fit"),
            ("monotone", "1 when |Cov| never increases with distance"),
        ],
    },
    TableSchema {
        file: "thermo_sweep.csv",
        experiment: "thermo",
        about: "Growing chains {-n, ..., n}.",
        columns: &[
            ("n", "half-width"),
            ("sites", "number of sites 2n + 1"),
            ("localMean", "Gibbs mean of the observable at site 0"),
            ("energyPerSite", "mean energy divided by the number of sites"),
            ("additivityDefect", "|X - X_left - X_right| for the cut after site 0 (empty for n = 0)"),
        ],
    },
    TableSchema {
        file: "thermo_theta.csv",
        experiment: "thermo",
        about: "Theta derivative of the phase when the interaction across a cut is scaled by 1 - theta.",
        columns: &[
            ("theta", "interpolation parameter"),
            ("site", "site index"),
            ("distance", "distance from the site to the cut"),
            ("supGradient", "sup |d/dx_l d/dtheta psi|"),
            ("supDthetaPsi", "sup |d/dtheta psi|"),
        ],
    },
    TableSchema {
        file: "verify.csv",
        experiment: "verify",
        about: "Acceptance checks.",
        columns: &[
            ("id", "criterion number"),
            ("name", "short description"),
            ("measured", "headline measured quantity"),
            ("threshold", "value it is compared against"),
            ("passed", "1 on success"),
        ],
    },
];

pub fn table(file: &str) -> &'static TableSchema {
    TABLES.iter().find(|t| t.file == file).unwrap_or_else(|| panic!("no schema for {file}"))
}

/// Markdown documentation of every table.
pub fn schema_markdown() -> String {
    let mut out = String::from(
        "# Output schema\n\nGenerated by `heatcorr`. Every CSV has a header row; floating-point values use\n\
         12-digit scientific notation, flags are 0/1, missing values are empty.\n",
    );
    let mut last = "";
    for t in TABLES {
        if t.experiment != last {
            out.push_str(&format!("\n## {}\n", t.experiment));
            last = t.experiment;
        }
        out.push_str(&format!("\n### `{}`\n\n{}\n\n| column | meaning |\n|---|---|\n", t.file, t.about));
        for (c, d) in t.columns {
            out.push_str(&format!("| `{c}` | {d} |\n"));
        }
    }
    out
}
