#![allow(dead_code)]

use std::path::PathBuf;

use wick_core::calculus::{ChartMap, VectorField};
use wick_core::chart::Chart;
use wick_core::exactnum::{parse_expr, RationalFunction, Series};
use wick_core::io;
use wick_core::momentum::LieAction;

pub fn data(rel: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn chart(name: &str, order: usize) -> Chart {
    io::parse_chart(&data(&format!("charts/{name}.json")), Some(order)).unwrap()
}

pub fn field(name: &str) -> VectorField {
    io::parse_field(&data(&format!("fields/{name}.json")), 1).unwrap()
}

pub fn map(name: &str) -> ChartMap {
    io::parse_map(&data(&format!("maps/{name}.json")), 1).unwrap()
}

pub fn action(name: &str) -> LieAction {
    io::parse_action(&data(&format!("actions/{name}.json")), 1).unwrap()
}

pub fn p(s: &str) -> RationalFunction {
    parse_expr(s, 2).unwrap()
}

pub fn series(coeffs: &[&str], order: usize) -> Series<RationalFunction> {
    Series::from_coeffs(coeffs.iter().map(|s| p(s)).collect(), order)
}
