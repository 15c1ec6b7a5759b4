//! Text container for fitted models.
//!
//! ```text
//! format_version = 1
//! model_kind = rpca
//! map.kind = fourier
//! map.s = 5.0000000000000000e-1
//! [matrix map.weights 200 3]
//! 1.2345678901234567e0,...
//! ...
//! end
//! ```
//!
//! Scalars are `key = value` lines, matrices are `[matrix name rows cols]`
//! blocks of comma-separated rows. Numbers use 17 significant digits, which
//! reproduces every `f64` exactly. The closing `end` line makes truncation
//! detectable.

use std::fs;
use std::path::Path;

use crate::apps::{AttributeStatus, AutoencoderModel, LupiAttribute, LupiModel, RidgeModel};
use crate::components::{RccaModel, RpcaModel};
use crate::error::{Error, Result};
use crate::kernel::{FeatureMap, FourierMap, KernelSpec, NystromMap, ScaleConvention};
use crate::linalg::{Matrix, Vector};

pub const FORMAT_VERSION: u32 = 1;

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Untyped contents of a container file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Container {
    pub kind: String,
    scalars: Vec<(String, String)>,
    matrices: Vec<(String, Matrix)>,
}

impl Container {
    pub fn new(kind: &str) -> Self {
        Container {
            kind: kind.to_owned(),
            ..Default::default()
        }
    }

    pub fn put(&mut self, key: &str, value: impl ToString) {
        self.scalars.push((key.to_owned(), value.to_string()));
    }

    pub fn put_f64(&mut self, key: &str, value: f64) {
        self.put(key, fmt_f64(value));
    }

    pub fn put_matrix(&mut self, name: &str, m: &Matrix) {
        self.matrices.push((name.to_owned(), m.clone()));
    }

    pub fn put_row(&mut self, name: &str, values: &[f64]) {
        self.put_matrix(name, &Matrix::from_row_slice(1, values.len(), values));
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.scalars
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| format_err(format!("missing entry `{key}`")))
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        let v = self.get(key)?;
        v.parse()
            .map_err(|_| format_err(format!("entry `{key}` is not a number: `{v}`")))
    }

    pub fn get_usize(&self, key: &str) -> Result<usize> {
        let v = self.get(key)?;
        v.parse()
            .map_err(|_| format_err(format!("entry `{key}` is not a count: `{v}`")))
    }

    pub fn matrix(&self, name: &str) -> Result<&Matrix> {
        self.matrices
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, m)| m)
            .ok_or_else(|| format_err(format!("missing matrix `{name}`")))
    }

    pub fn row(&self, name: &str) -> Result<Vec<f64>> {
        let m = self.matrix(name)?;
        if m.nrows() != 1 {
            return Err(format_err(format!("matrix `{name}` should have one row")));
        }
        Ok(m.iter().copied().collect())
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "format_version = {FORMAT_VERSION}\nmodel_kind = {}\n",
            self.kind
        );
        for (k, v) in &self.scalars {
            out.push_str(&format!("{k} = {v}\n"));
        }
        for (name, m) in &self.matrices {
            out.push_str(&format!("[matrix {name} {} {}]\n", m.nrows(), m.ncols()));
            for row in m.row_iter() {
                let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let mut next_kv = |want: &str| -> Result<String> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| format_err("container is truncated"))?;
            match line.split_once(" = ") {
                Some((k, v)) if k == want => Ok(v.to_owned()),
                _ => Err(format_err(format!("line {no}: expected `{want} = ...`"))),
            }
        };
        let version = next_kv("format_version")?;
        if version != FORMAT_VERSION.to_string() {
            return Err(format_err(format!(
                "unsupported format_version {version} (this build reads {FORMAT_VERSION})"
            )));
        }
        let mut c = Container::new(&next_kv("model_kind")?);
        let mut finished = false;
        while let Some((no, line)) = lines.next() {
            if line == "end" {
                finished = true;
                break;
            }
            if let Some(spec) = line
                .strip_prefix("[matrix ")
                .and_then(|s| s.strip_suffix(']'))
            {
                let parts: Vec<&str> = spec.split_whitespace().collect();
                let (name, rows, cols) = match parts.as_slice() {
                    [name, r, c] => (
                        *name,
                        r.parse::<usize>()
                            .map_err(|_| format_err(format!("line {no}: bad row count")))?,
                        c.parse::<usize>()
                            .map_err(|_| format_err(format!("line {no}: bad column count")))?,
                    ),
                    _ => return Err(format_err(format!("line {no}: malformed matrix header"))),
                };
                let mut values = Vec::with_capacity(rows * cols);
                for _ in 0..rows {
                    let (rno, row) = lines
                        .next()
                        .ok_or_else(|| format_err(format!("matrix `{name}` is truncated")))?;
                    let before = values.len();
                    if cols > 0 {
                        for field in row.split(',') {
                            values.push(field.trim().parse::<f64>().map_err(|_| {
                                format_err(format!("line {rno}: `{field}` is not a number"))
                            })?);
                        }
                    }
                    if values.len() - before != cols {
                        return Err(format_err(format!(
                            "line {rno}: matrix `{name}` row has {} values, expected {cols}",
                            values.len() - before
                        )));
                    }
                }
                c.matrices
                    .push((name.to_owned(), Matrix::from_row_slice(rows, cols, &values)));
            } else if let Some((k, v)) = line.split_once(" = ") {
                c.scalars.push((k.to_owned(), v.to_owned()));
            } else {
                return Err(format_err(format!("line {no}: unrecognized line `{line}`")));
            }
        }
        if !finished {
            return Err(format_err("container is truncated (missing `end`)"));
        }
        Ok(c)
    }
}

fn put_map(c: &mut Container, prefix: &str, map: &FeatureMap) {
    c.put(&format!("{prefix}.kind"), map.kind_name());
    match map {
        FeatureMap::Fourier(f) => {
            c.put_f64(&format!("{prefix}.s"), f.spec().s());
            c.put(&format!("{prefix}.convention"), f.convention().name());
            c.put_matrix(&format!("{prefix}.weights"), f.weights());
            c.put_row(&format!("{prefix}.offsets"), f.offsets());
        }
        FeatureMap::Nystrom(nm) => {
            c.put_f64(&format!("{prefix}.s"), nm.spec().s());
            c.put_matrix(&format!("{prefix}.landmarks"), nm.landmarks());
            c.put_matrix(&format!("{prefix}.whitener"), nm.whitener());
        }
        FeatureMap::Identity { dim } => c.put(&format!("{prefix}.dim"), dim),
    }
}

fn get_map(c: &Container, prefix: &str) -> Result<FeatureMap> {
    let key = |s: &str| format!("{prefix}.{s}");
    let spec = || KernelSpec::new(c.get_f64(&key("s"))?);
    match c.get(&key("kind"))? {
        "fourier" => Ok(FeatureMap::Fourier(FourierMap::from_parts(
            c.matrix(&key("weights"))?.clone(),
            c.row(&key("offsets"))?,
            spec()?,
            ScaleConvention::parse(c.get(&key("convention"))?)?,
        )?)),
        "nystrom" => Ok(FeatureMap::Nystrom(NystromMap::from_parts(
            c.matrix(&key("landmarks"))?.clone(),
            c.matrix(&key("whitener"))?.clone(),
            spec()?,
        )?)),
        "identity" => Ok(FeatureMap::identity(c.get_usize(&key("dim"))?)),
        other => Err(format_err(format!("unknown feature map kind `{other}`"))),
    }
}

fn vector(c: &Container, name: &str) -> Result<Vector> {
    Ok(Vector::from_vec(c.row(name)?))
}

/// Any model the container can hold.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Rpca(RpcaModel),
    Rcca(RccaModel),
    Ridge(RidgeModel),
    Autoencoder(AutoencoderModel),
    Lupi(LupiModel),
}

impl Model {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Model::Rpca(_) => "rpca",
            Model::Rcca(_) => "rcca",
            Model::Ridge(_) => "ridge",
            Model::Autoencoder(_) => "autoencoder",
            Model::Lupi(_) => "lupi",
        }
    }
}

fn put_rpca(c: &mut Container, p: &str, m: &RpcaModel) {
    put_map(c, &format!("{p}map"), m.map());
    c.put_row(&format!("{p}feature_means"), m.feature_means().as_slice());
    c.put_matrix(&format!("{p}loadings"), m.loadings());
    c.put_row(&format!("{p}eigenvalues"), m.eigenvalues());
}

fn get_rpca(c: &Container, p: &str) -> Result<RpcaModel> {
    RpcaModel::from_parts(
        get_map(c, &format!("{p}map"))?,
        vector(c, &format!("{p}feature_means"))?,
        c.matrix(&format!("{p}loadings"))?.clone(),
        c.row(&format!("{p}eigenvalues"))?,
    )
}

fn put_ridge(c: &mut Container, p: &str, m: &RidgeModel) {
    put_map(c, &format!("{p}map"), m.map());
    c.put_f64(&format!("{p}lambda"), m.lambda());
    c.put_matrix(&format!("{p}weights"), m.weights());
    c.put_row(&format!("{p}intercepts"), m.intercepts());
}

fn get_ridge(c: &Container, p: &str) -> Result<RidgeModel> {
    RidgeModel::from_parts(
        get_map(c, &format!("{p}map"))?,
        c.matrix(&format!("{p}weights"))?.clone(),
        c.row(&format!("{p}intercepts"))?,
        c.get_f64(&format!("{p}lambda"))?,
    )
}

pub fn to_container(model: &Model) -> Container {
    let mut c = Container::new(model.kind_name());
    match model {
        Model::Rpca(m) => put_rpca(&mut c, "", m),
        Model::Ridge(m) => put_ridge(&mut c, "", m),
        Model::Rcca(m) => {
            c.put_f64("gamma_x", m.gamma_x());
            c.put_f64("gamma_y", m.gamma_y());
            put_map(&mut c, "map_x", m.map_x());
            put_map(&mut c, "map_y", m.map_y());
            c.put_row("means_x", m.means_x().as_slice());
            c.put_row("means_y", m.means_y().as_slice());
            c.put_matrix("basis_x", m.basis_x());
            c.put_matrix("basis_y", m.basis_y());
            c.put_row("correlations", m.correlations());
        }
        Model::Autoencoder(m) => {
            put_rpca(&mut c, "encoder.", &m.encoder);
            put_ridge(&mut c, "decoder.", &m.decoder);
        }
        Model::Lupi(m) => {
            c.put("per_attr", m.per_attr());
            c.put_f64("gamma", m.gamma());
            c.put("attributes", m.attributes().len());
            put_map(&mut c, "map_x", m.map_x());
            c.put_row("means_x", m.means_x().as_slice());
            for (i, a) in m.attributes().iter().enumerate() {
                c.put(&format!("attr.{i}.column"), a.column);
                match &a.status {
                    AttributeStatus::Fitted {
                        basis,
                        correlations,
                    } => {
                        c.put(&format!("attr.{i}.status"), "fitted");
                        c.put_matrix(&format!("attr.{i}.basis"), basis);
                        c.put_row(&format!("attr.{i}.correlations"), correlations);
                    }
                    AttributeStatus::Skipped { reason } => {
                        c.put(&format!("attr.{i}.status"), "skipped");
                        c.put(&format!("attr.{i}.reason"), reason.replace('\n', " "));
                    }
                }
            }
        }
    }
    c
}

pub fn from_container(c: &Container) -> Result<Model> {
    match c.kind.as_str() {
        "rpca" => Ok(Model::Rpca(get_rpca(c, "")?)),
        "ridge" => Ok(Model::Ridge(get_ridge(c, "")?)),
        "rcca" => Ok(Model::Rcca(RccaModel::from_parts(
            get_map(c, "map_x")?,
            get_map(c, "map_y")?,
            vector(c, "means_x")?,
            vector(c, "means_y")?,
            c.matrix("basis_x")?.clone(),
            c.matrix("basis_y")?.clone(),
            c.row("correlations")?,
            c.get_f64("gamma_x")?,
            c.get_f64("gamma_y")?,
        )?)),
        "autoencoder" => Ok(Model::Autoencoder(AutoencoderModel::from_parts(
            get_rpca(c, "encoder.")?,
            get_ridge(c, "decoder.")?,
        )?)),
        "lupi" => {
            let count = c.get_usize("attributes")?;
            let mut attributes = Vec::with_capacity(count);
            for i in 0..count {
                let column = c.get_usize(&format!("attr.{i}.column"))?;
                let status = match c.get(&format!("attr.{i}.status"))? {
                    "fitted" => AttributeStatus::Fitted {
                        basis: c.matrix(&format!("attr.{i}.basis"))?.clone(),
                        correlations: c.row(&format!("attr.{i}.correlations"))?,
                    },
                    "skipped" => AttributeStatus::Skipped {
                        reason: c.get(&format!("attr.{i}.reason"))?.to_owned(),
                    },
                    other => return Err(format_err(format!("unknown attribute status `{other}`"))),
                };
                attributes.push(LupiAttribute { column, status });
            }
            Ok(Model::Lupi(LupiModel::from_parts(
                get_map(c, "map_x")?,
                vector(c, "means_x")?,
                c.get_usize("per_attr")?,
                c.get_f64("gamma")?,
                attributes,
            )?))
        }
        other => Err(format_err(format!("unknown model_kind `{other}`"))),
    }
}

pub fn save_model(model: &Model, path: &Path) -> Result<()> {
    fs::write(path, to_container(model).render())?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<Model> {
    let text = fs::read_to_string(path)?;
    from_container(&Container::parse(&text)?)
}
