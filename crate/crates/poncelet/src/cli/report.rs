//! Report documents: the stable JSON schema `poncelet/1` (deterministic
//! field order, decimal numbers with 17 significant digits so values
//! round-trip exactly) and the CSV projection.

use serde_json::Value;

use crate::scalar::Scalar;
use crate::tolerance::Tolerance;

use super::RangeSpec;

/// Schema tag of every emitted document.
pub const SCHEMA_VERSION: &str = "poncelet/1";

/// 17 significant digits: enough to reproduce any f64 bit pattern.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

fn fmt_scalar(z: Scalar) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

fn fmt_scalar_list(zs: &[Scalar]) -> String {
    let parts: Vec<String> = zs.iter().map(|&z| fmt_scalar(z)).collect();
    format!("[{}]", parts.join(","))
}

fn fmt_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Echo of the run configuration inside a report.
#[derive(Debug, Clone)]
pub struct ConfigEcho {
    pub command: String,
    pub n: usize,
    pub seed: u64,
    pub k_range: Option<RangeSpec>,
    pub start_range: Option<RangeSpec>,
    pub tol: Tolerance,
    pub format: String,
    pub tool_version: String,
}

/// The reproducible data a command generated from its seed; enough to
/// recompute every residual without trusting any reported root.
#[derive(Debug, Clone)]
pub enum GeneratedData {
    Pyramid {
        real_mode: bool,
        nodes: Vec<Scalar>,
        face_weights: Vec<Scalar>,
        point_weights: Vec<Scalar>,
    },
    Lateral {
        real_mode: bool,
        params: Vec<Scalar>,
        second_form: Vec<Scalar>,
        combination: Vec<Scalar>,
        curve_degree: usize,
        curve: Vec<Scalar>,
        interpolation_dimension: usize,
    },
}

/// One sweep item: a family parameter (k or a trace start), the parameters
/// it produced, and the verification numbers.
#[derive(Debug, Clone)]
pub struct ItemReport {
    pub index: usize,
    pub parameter: Scalar,
    pub params: Vec<Scalar>,
    pub max_residual: Option<f64>,
    pub symmetry_defect: Option<f64>,
    pub hyperosculation_orders: Option<Vec<usize>>,
    pub verdict: Option<bool>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub items: usize,
    pub ok: usize,
    pub failed: usize,
    pub skipped: usize,
    pub max_residual: f64,
}

impl Aggregate {
    pub fn from_items(items: &[ItemReport]) -> Self {
        let mut agg = Aggregate {
            items: items.len(),
            ok: 0,
            failed: 0,
            skipped: 0,
            max_residual: 0.0,
        };
        for item in items {
            match item.verdict {
                Some(true) => agg.ok += 1,
                Some(false) => agg.failed += 1,
                None => agg.skipped += 1,
            }
            if let Some(r) = item.max_residual {
                agg.max_residual = agg.max_residual.max(r);
            }
        }
        agg
    }
}

#[derive(Debug, Clone)]
pub struct ReportDocument {
    pub version: String,
    pub config: ConfigEcho,
    pub generated: GeneratedData,
    pub items: Vec<ItemReport>,
    pub aggregate: Aggregate,
}

impl ReportDocument {
    pub fn all_ok(&self) -> bool {
        self.aggregate.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        s.push_str(&format!("  \"version\": {},\n", fmt_string(&self.version)));
        s.push_str("  \"config\": {\n");
        let c = &self.config;
        s.push_str(&format!("    \"command\": {},\n", fmt_string(&c.command)));
        s.push_str(&format!("    \"n\": {},\n", c.n));
        s.push_str(&format!("    \"seed\": {},\n", c.seed));
        let range = |r: &Option<RangeSpec>| match r {
            Some(r) => format!("[{},{},{}]", fmt_f64(r.lo), fmt_f64(r.hi), r.count),
            None => "null".to_string(),
        };
        s.push_str(&format!("    \"k_range\": {},\n", range(&c.k_range)));
        s.push_str(&format!("    \"start_range\": {},\n", range(&c.start_range)));
        s.push_str(&format!(
            "    \"tol\": {{\"rel_eps\": {}, \"rank_eps\": {}, \"root_sep_eps\": {}}},\n",
            fmt_f64(c.tol.rel_eps),
            fmt_f64(c.tol.rank_eps),
            fmt_f64(c.tol.root_sep_eps)
        ));
        s.push_str(&format!("    \"format\": {},\n", fmt_string(&c.format)));
        s.push_str(&format!(
            "    \"tool_version\": {},\n",
            fmt_string(&c.tool_version)
        ));
        s.push_str("    \"generated\": ");
        match &self.generated {
            GeneratedData::Pyramid {
                real_mode,
                nodes,
                face_weights,
                point_weights,
            } => {
                s.push_str("{\n");
                s.push_str("      \"mode\": \"pyramid\",\n");
                s.push_str(&format!("      \"real_mode\": {},\n", real_mode));
                s.push_str(&format!("      \"nodes\": {},\n", fmt_scalar_list(nodes)));
                s.push_str(&format!(
                    "      \"face_weights\": {},\n",
                    fmt_scalar_list(face_weights)
                ));
                s.push_str(&format!(
                    "      \"point_weights\": {}\n",
                    fmt_scalar_list(point_weights)
                ));
                s.push_str("    }\n");
            }
            GeneratedData::Lateral {
                real_mode,
                params,
                second_form,
                combination,
                curve_degree,
                curve,
                interpolation_dimension,
            } => {
                s.push_str("{\n");
                s.push_str("      \"mode\": \"lateral\",\n");
                s.push_str(&format!("      \"real_mode\": {},\n", real_mode));
                s.push_str(&format!("      \"params\": {},\n", fmt_scalar_list(params)));
                s.push_str(&format!(
                    "      \"second_form\": {},\n",
                    fmt_scalar_list(second_form)
                ));
                s.push_str(&format!(
                    "      \"combination\": {},\n",
                    fmt_scalar_list(combination)
                ));
                s.push_str(&format!("      \"curve_degree\": {},\n", curve_degree));
                s.push_str(&format!("      \"curve\": {},\n", fmt_scalar_list(curve)));
                s.push_str(&format!(
                    "      \"interpolation_dimension\": {}\n",
                    interpolation_dimension
                ));
                s.push_str("    }\n");
            }
        }
        s.push_str("  },\n");
        s.push_str("  \"items\": [\n");
        for (i, item) in self.items.iter().enumerate() {
            s.push_str("    {");
            s.push_str(&format!("\"index\": {}, ", item.index));
            s.push_str(&format!("\"parameter\": {}, ", fmt_scalar(item.parameter)));
            s.push_str(&format!("\"params\": {}, ", fmt_scalar_list(&item.params)));
            match item.max_residual {
                Some(r) => s.push_str(&format!("\"max_residual\": {}, ", fmt_f64(r))),
                None => s.push_str("\"max_residual\": null, "),
            }
            match item.symmetry_defect {
                Some(d) => s.push_str(&format!("\"symmetry_defect\": {}, ", fmt_f64(d))),
                None => s.push_str("\"symmetry_defect\": null, "),
            }
            match &item.hyperosculation_orders {
                Some(orders) => {
                    let parts: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
                    s.push_str(&format!(
                        "\"hyperosculation_orders\": [{}], ",
                        parts.join(",")
                    ));
                }
                None => s.push_str("\"hyperosculation_orders\": null, "),
            }
            match item.verdict {
                Some(v) => s.push_str(&format!("\"verdict\": {}, ", v)),
                None => s.push_str("\"verdict\": null, "),
            }
            s.push_str(&format!("\"status\": {}", fmt_string(&item.status)));
            s.push('}');
            if i + 1 < self.items.len() {
                s.push(',');
            }
            s.push('\n');
        }
        s.push_str("  ],\n");
        let a = &self.aggregate;
        s.push_str(&format!(
            "  \"aggregate\": {{\"items\": {}, \"ok\": {}, \"failed\": {}, \"skipped\": {}, \"max_residual\": {}}}\n",
            a.items, a.ok, a.failed, a.skipped, fmt_f64(a.max_residual)
        ));
        s.push_str("}\n");
        s
    }

    /// CSV projection: `item_index, param_0_re, param_0_im, ...,
    /// max_residual, verdict` with one row per item. Missing parameters of
    /// skipped items are left empty.
    pub fn to_csv(&self) -> String {
        let width = self.config.n + 1;
        let mut s = String::from("item_index");
        for i in 0..width {
            s.push_str(&format!(",param_{i}_re,param_{i}_im"));
        }
        s.push_str(",max_residual,verdict\n");
        for item in &self.items {
            s.push_str(&item.index.to_string());
            for i in 0..width {
                match item.params.get(i) {
                    Some(z) => s.push_str(&format!(",{},{}", fmt_f64(z.re), fmt_f64(z.im))),
                    None => s.push_str(",,"),
                }
            }
            match item.max_residual {
                Some(r) => s.push_str(&format!(",{}", fmt_f64(r))),
                None => s.push(','),
            }
            let verdict = match item.verdict {
                Some(true) => "true",
                Some(false) => "false",
                None => "skipped",
            };
            s.push_str(&format!(",{verdict}\n"));
        }
        s
    }

    pub fn parse_json(text: &str) -> Result<ReportDocument, String> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| format!("not valid JSON: {e}"))?;
        let root = value.as_object().ok_or("document is not an object")?;
        let version = get_str(root, "version")?;
        if version != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema version {version:?}, expected {SCHEMA_VERSION:?}"
            ));
        }
        let config_v = root
            .get("config")
            .and_then(Value::as_object)
            .ok_or("missing object field config")?;
        let tol_v = config_v
            .get("tol")
            .and_then(Value::as_object)
            .ok_or("missing object field config.tol")?;
        let tol = Tolerance::new(
            get_f64(tol_v, "rel_eps")?,
            get_f64(tol_v, "rank_eps")?,
            get_f64(tol_v, "root_sep_eps")?,
        )
        .map_err(|e| format!("invalid tolerances: {e}"))?;
        let range_field = |key: &str| -> Result<Option<RangeSpec>, String> {
            match config_v.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::Array(a)) if a.len() == 3 => {
                    let lo = a[0].as_f64().ok_or(format!("{key}[0] not a number"))?;
                    let hi = a[1].as_f64().ok_or(format!("{key}[1] not a number"))?;
                    let count =
                        a[2].as_u64().ok_or(format!("{key}[2] not an integer"))? as usize;
                    RangeSpec::new(lo, hi, count).map(Some)
                }
                Some(_) => Err(format!("field {key} must be [lo, hi, count] or null")),
            }
        };
        let config = ConfigEcho {
            command: get_str(config_v, "command")?,
            n: get_usize(config_v, "n")?,
            seed: get_u64(config_v, "seed")?,
            k_range: range_field("k_range")?,
            start_range: range_field("start_range")?,
            tol,
            format: get_str(config_v, "format")?,
            tool_version: get_str(config_v, "tool_version")?,
        };
        let gen_v = config_v
            .get("generated")
            .and_then(Value::as_object)
            .ok_or("missing object field config.generated")?;
        let generated = match get_str(gen_v, "mode")?.as_str() {
            "pyramid" => GeneratedData::Pyramid {
                real_mode: get_bool(gen_v, "real_mode")?,
                nodes: get_scalars(gen_v, "nodes")?,
                face_weights: get_scalars(gen_v, "face_weights")?,
                point_weights: get_scalars(gen_v, "point_weights")?,
            },
            "lateral" => GeneratedData::Lateral {
                real_mode: get_bool(gen_v, "real_mode")?,
                params: get_scalars(gen_v, "params")?,
                second_form: get_scalars(gen_v, "second_form")?,
                combination: get_scalars(gen_v, "combination")?,
                curve_degree: get_usize(gen_v, "curve_degree")?,
                curve: get_scalars(gen_v, "curve")?,
                interpolation_dimension: get_usize(gen_v, "interpolation_dimension")?,
            },
            other => return Err(format!("unknown generated.mode {other:?}")),
        };
        let items_v = root
            .get("items")
            .and_then(Value::as_array)
            .ok_or("missing array field items")?;
        let mut items = Vec::with_capacity(items_v.len());
        for (i, item_v) in items_v.iter().enumerate() {
            let obj = item_v
                .as_object()
                .ok_or(format!("items[{i}] is not an object"))?;
            let orders = match obj.get("hyperosculation_orders") {
                None | Some(Value::Null) => None,
                Some(Value::Array(a)) => Some(
                    a.iter()
                        .map(|v| {
                            v.as_u64()
                                .map(|x| x as usize)
                                .ok_or(format!("items[{i}] has non-integer order"))
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                Some(_) => return Err(format!("items[{i}].hyperosculation_orders invalid")),
            };
            items.push(ItemReport {
                index: get_usize(obj, "index")?,
                parameter: get_scalar_value(
                    obj.get("parameter")
                        .ok_or(format!("items[{i}] missing parameter"))?,
                )?,
                params: get_scalars(obj, "params")?,
                max_residual: get_opt_f64(obj, "max_residual")?,
                symmetry_defect: get_opt_f64(obj, "symmetry_defect")?,
                hyperosculation_orders: orders,
                verdict: match obj.get("verdict") {
                    None | Some(Value::Null) => None,
                    Some(Value::Bool(b)) => Some(*b),
                    Some(_) => return Err(format!("items[{i}].verdict must be bool or null")),
                },
                status: get_str(obj, "status")?,
            });
        }
        let agg_v = root
            .get("aggregate")
            .and_then(Value::as_object)
            .ok_or("missing object field aggregate")?;
        let aggregate = Aggregate {
            items: get_usize(agg_v, "items")?,
            ok: get_usize(agg_v, "ok")?,
            failed: get_usize(agg_v, "failed")?,
            skipped: get_usize(agg_v, "skipped")?,
            max_residual: get_f64(agg_v, "max_residual")?,
        };
        Ok(ReportDocument {
            version,
            config,
            generated,
            items,
            aggregate,
        })
    }
}

type Obj = serde_json::Map<String, Value>;

fn get_str(obj: &Obj, key: &str) -> Result<String, String> {
    obj.get(key)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or(format!("missing string field {key}"))
}

fn get_f64(obj: &Obj, key: &str) -> Result<f64, String> {
    obj.get(key)
        .and_then(Value::as_f64)
        .ok_or(format!("missing number field {key}"))
}

fn get_opt_f64(obj: &Obj, key: &str) -> Result<Option<f64>, String> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or(format!("field {key} must be a number or null")),
    }
}

fn get_u64(obj: &Obj, key: &str) -> Result<u64, String> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or(format!("missing integer field {key}"))
}

fn get_usize(obj: &Obj, key: &str) -> Result<usize, String> {
    get_u64(obj, key).map(|x| x as usize)
}

fn get_bool(obj: &Obj, key: &str) -> Result<bool, String> {
    obj.get(key)
        .and_then(Value::as_bool)
        .ok_or(format!("missing boolean field {key}"))
}

fn get_scalar_value(v: &Value) -> Result<Scalar, String> {
    let a = v.as_array().ok_or("scalar must be [re, im]")?;
    if a.len() != 2 {
        return Err("scalar must be [re, im]".to_string());
    }
    let re = a[0].as_f64().ok_or("scalar real part not a number")?;
    let im = a[1].as_f64().ok_or("scalar imaginary part not a number")?;
    Ok(Scalar::new(re, im))
}

fn get_scalars(obj: &Obj, key: &str) -> Result<Vec<Scalar>, String> {
    obj.get(key)
        .and_then(Value::as_array)
        .ok_or(format!("missing array field {key}"))?
        .iter()
        .map(get_scalar_value)
        .collect()
}
