//! Published reference tables and their recomputation.
//!
//! Every published number is kept as the printed string so the tolerance
//! (five units in the last printed digit) follows from the string itself.

use rayon::prelude::*;

use crate::asymptotic::{
    beta_star, chi_of_w, gap_mid_beta, gap_near_beta_star, gap_neg_beta, l_constant, r0_of_beta,
    r_of_gamma,
};
use crate::characteristic::{spectral_gap_with, ModelParams};
use crate::error::{Error, Result};
use crate::real::Precision;
use crate::specfun::{airy_zero, AiryZeroKind};

/// Table identifiers 2 to 6.
pub const TABLE_IDS: [u8; 5] = [2, 3, 4, 5, 6];

const ETAS: [f64; 9] = [0.5, 0.25, 0.1, 0.05, 0.025, 0.01, 0.005, 0.0025, 0.001];

// table 2, beta = -1: (eta, r - eta, estimate of r - eta)
const T2: [(f64, &str, &str); 7] = [
    (0.5, "2.50092e-2", "3.57325e-2"),
    (0.4, "1.91877e-2", "2.48906e-2"),
    (0.3, "1.16366e-2", "1.42105e-2"),
    (0.2, "4.29814e-3", "5.04257e-3"),
    (0.1, "2.64792e-4", "2.92685e-4"),
    (0.05, "1.32910e-6", "1.39448e-6"),
    (0.025, "4.25017e-11", "4.47665e-11"),
];

// table 3, beta = 2: r per eta row; r0 column is constant
const T3: [&str; 9] = [
    "0.98463", "0.97072", "0.95576", "0.94741", "0.94150", "0.93671", "0.93470", "0.93356",
    "0.93282",
];
const T3_R0: &str = "0.93229";

// table 4, beta = 1: (r, estimate)
const T4: [(&str, &str); 9] = [
    ("0.87510", "1.1778"),
    ("0.72686", "0.83452"),
    ("0.54242", "0.56732"),
    ("0.44074", "0.44990"),
    ("0.37193", "0.37593"),
    ("0.31673", "0.31836"),
    ("0.29217", "0.29306"),
    ("0.27664", "0.27713"),
    ("0.26450", "0.26472"),
];

// table 5: per gamma in (1, 0, -1), (r, eta R(gamma)) per eta row
const T5_GAMMAS: [f64; 3] = [1.0, 0.0, -1.0];
const T5: [[(&str, &str); 3]; 9] = [
    [("0.81266", "1.50000"), ("0.65385", "1.00000"), ("0.54816", "0.69412")],
    [("0.53164", "0.75000"), ("0.38029", "0.50000"), ("0.29242", "0.34706")],
    [("0.24948", "0.30000"), ("0.16989", "0.20000"), ("0.12408", "0.13882")],
    [("0.13266", "0.15000"), ("0.08929", "0.10000"), ("0.06399", "0.06941")],
    [("0.06896", "0.07500"), ("0.04619", "0.05000"), ("0.03273", "0.03471")],
    [("0.02848", "0.03000"), ("0.01902", "0.02000"), ("0.01337", "0.01388")],
    [("0.01446", "0.01500"), ("0.00965", "0.01000"), ("0.00676", "0.00694")],
    [("0.00731", "0.00750"), ("0.00488", "0.00500"), ("0.00340", "0.00347")],
    [("0.00295", "0.00300"), ("0.00197", "0.00200"), ("0.00137", "0.00139")],
];

// table 6, beta = beta*: (r, estimate); the beta*^2/4 column is constant
const T6: [(&str, &str); 9] = [
    ("0.97803", "1.48841"),
    ("0.95673", "1.25673"),
    ("0.93129", "1.07644"),
    ("0.91493", "0.99721"),
    ("0.90139", "0.94729"),
    ("0.88770", "0.90845"),
    ("0.88016", "0.89138"),
    ("0.87462", "0.88062"),
    ("0.86966", "0.87225"),
];
const T6_QUARTER_SQUARE: &str = "0.86231";

// constants quoted alongside the tables
const BETA_STAR: &str = "1.85722";
const L_CONST: &str = "2.73875";
const A0: &str = "-2.33810";
const CHI0: &str = "-1.01870";
const R_GAMMA: [(f64, &str); 3] = [(0.0, "2"), (1.0, "3"), (-1.0, "1.3882")];

/// Known mismatches between a published cell and the recomputation.
const DEV_T2_LAST: &str = "published 4.25017e-11 looks like a digit slip; independent root finding gives 4.37521e-11";
const DEV_T6_EST: &str = "published column matches (beta*/2)^(1/3) in the Airy term, not the 2/3 power of the formula";
const DEV_CHI0: &str = "published -1.01870 differs from the first zero of Ai', -1.0187929716";

/// Size of one unit in the last printed digit of `s`.
#[must_use]
pub fn last_digit_unit(s: &str) -> f64 {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().unwrap_or(0)),
        None => (s, 0),
    };
    let decimals = mant.find('.').map_or(0, |i| mant.len() - i - 1) as i32;
    10f64.powi(exp - decimals)
}

/// One computed-versus-published comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub column: String,
    pub eta: Option<f64>,
    pub computed: f64,
    pub published: f64,
    pub published_text: &'static str,
    pub tol: f64,
    pub pass: bool,
    /// Set when the published value is known to disagree.
    pub deviation: Option<&'static str>,
}

impl Cell {
    fn new(column: impl Into<String>, eta: Option<f64>, computed: f64, text: &'static str) -> Self {
        let published: f64 = text.parse().expect("fixture parses");
        let tol = 5.0 * last_digit_unit(text);
        Self {
            column: column.into(),
            eta,
            computed,
            published,
            published_text: text,
            tol,
            pass: (computed - published).abs() <= tol,
            deviation: None,
        }
    }

    fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.pass = (self.computed - self.published).abs() <= tol;
        self
    }

    fn deviates(mut self, why: &'static str) -> Self {
        self.deviation = Some(why);
        self
    }

    #[must_use]
    pub fn difference(&self) -> f64 {
        (self.computed - self.published).abs()
    }
}

/// All comparisons for one table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableReport {
    pub id: u8,
    pub title: &'static str,
    pub cells: Vec<Cell>,
}

impl TableReport {
    /// True when every cell without a recorded deviation passes.
    #[must_use]
    pub fn pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass || c.deviation.is_some())
    }
}

fn gap(beta: f64, eta: f64, precision: Precision) -> Result<f64> {
    Ok(spectral_gap_with(ModelParams::new(beta, eta)?, precision)?.r)
}

fn gap_minus_eta(beta: f64, eta: f64, precision: Precision) -> Result<f64> {
    Ok(spectral_gap_with(ModelParams::new(beta, eta)?, precision)?.r_minus_eta)
}

fn table2() -> Result<Vec<Cell>> {
    let rows: Vec<Result<Vec<Cell>>> = T2
        .par_iter()
        .map(|&(eta, exact, est)| {
            let precision = if eta < 0.1 { Precision::Extended } else { Precision::Double };
            let r = gap_minus_eta(-1.0, eta, precision)?;
            let e = gap_neg_beta(ModelParams::new(-1.0, eta)?)?.value - eta;
            let mut c = Cell::new("r-eta", Some(eta), r, exact);
            if eta == 0.025 {
                c = c.deviates(DEV_T2_LAST);
            }
            Ok(vec![c, Cell::new("estimate", Some(eta), e, est)])
        })
        .collect();
    flatten(rows)
}

fn table3() -> Result<Vec<Cell>> {
    let rows: Vec<Result<Vec<Cell>>> = ETAS
        .par_iter()
        .zip(T3.par_iter())
        .map(|(&eta, &r)| Ok(vec![Cell::new("r", Some(eta), gap(2.0, eta, Precision::Auto)?, r)]))
        .collect();
    let mut cells = flatten(rows)?;
    let r0 = r0_of_beta(2.0)?.ok_or_else(|| Error::NoRoot("r0(2) missing".into()))?;
    cells.push(Cell::new("r0", None, r0, T3_R0).with_tol(1e-5));
    Ok(cells)
}

fn table4() -> Result<Vec<Cell>> {
    let rows: Vec<Result<Vec<Cell>>> = ETAS
        .par_iter()
        .zip(T4.par_iter())
        .map(|(&eta, &(r, est))| {
            let p = ModelParams::new(1.0, eta)?;
            // the published column is the two-term estimate
            let e = gap_mid_beta(p)?.leading;
            Ok(vec![
                Cell::new("r", Some(eta), gap(1.0, eta, Precision::Auto)?, r),
                Cell::new("estimate", Some(eta), e, est),
            ])
        })
        .collect();
    flatten(rows)
}

fn table5() -> Result<Vec<Cell>> {
    let rg: Vec<f64> = T5_GAMMAS.iter().map(|&g| r_of_gamma(g)).collect::<Result<_>>()?;
    let rows: Vec<Result<Vec<Cell>>> = ETAS
        .par_iter()
        .zip(T5.par_iter())
        .map(|(&eta, row)| {
            let mut out = Vec::new();
            for (k, &(r, est)) in row.iter().enumerate() {
                let g = T5_GAMMAS[k];
                let beta = g * eta.sqrt();
                out.push(Cell::new(format!("r[gamma={g}]"), Some(eta), gap(beta, eta, Precision::Auto)?, r));
                out.push(Cell::new(format!("eta*R[gamma={g}]"), Some(eta), eta * rg[k], est));
            }
            Ok(out)
        })
        .collect();
    let mut cells = flatten(rows)?;
    for (g, text) in R_GAMMA {
        let tol = if text.contains('.') { 1e-4 } else { 1e-9 };
        cells.push(Cell::new(format!("R({g})"), None, r_of_gamma(g)?, text).with_tol(tol));
    }
    Ok(cells)
}

fn table6() -> Result<Vec<Cell>> {
    let bs = beta_star();
    let rows: Vec<Result<Vec<Cell>>> = ETAS
        .par_iter()
        .zip(T6.par_iter())
        .map(|(&eta, &(r, est))| {
            let e = gap_near_beta_star(ModelParams::new(bs, eta)?)?.value;
            let chi: f64 = CHI0.parse().expect("fixture parses");
            let printed = bs * bs / 4.0 - eta.powf(2.0 / 3.0) * (bs / 2.0).cbrt() * chi;
            Ok(vec![
                Cell::new("r", Some(eta), gap(bs, eta, Precision::Auto)?, r),
                Cell::new("estimate", Some(eta), e, est).deviates(DEV_T6_EST),
                Cell::new("estimate[cube root, chi=-1.01870]", Some(eta), printed, est),
            ])
        })
        .collect();
    let mut cells = flatten(rows)?;
    cells.push(Cell::new("beta*^2/4", None, bs * bs / 4.0, T6_QUARTER_SQUARE).with_tol(1e-5));
    cells.push(Cell::new("beta*", None, bs, BETA_STAR).with_tol(1e-5));
    cells.push(Cell::new("L", None, l_constant(), L_CONST).with_tol(1e-4));
    cells.push(Cell::new("a0", None, airy_zero(AiryZeroKind::OfAi, 0)?, A0).with_tol(1e-5));
    cells.push(Cell::new("chi(0)", None, chi_of_w(0.0)?, CHI0).with_tol(1e-5).deviates(DEV_CHI0));
    Ok(cells)
}

fn flatten(rows: Vec<Result<Vec<Cell>>>) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// Recomputes every cell of table `id` (2 to 6).
pub fn reproduce(id: u8) -> Result<TableReport> {
    let (title, cells) = match id {
        2 => ("beta = -1: r - eta and its estimate", table2()?),
        3 => ("beta = 2: r and r0(beta)", table3()?),
        4 => ("beta = 1: r and the mid-beta estimate", table4()?),
        5 => ("gamma = 1, 0, -1: r and eta R(gamma)", table5()?),
        6 => ("beta = beta*: r, beta*^2/4 and the transition estimate", table6()?),
        _ => return Err(Error::Domain(format!("no table {id}; expected 2 to 6"))),
    };
    Ok(TableReport { id, title, cells })
}
