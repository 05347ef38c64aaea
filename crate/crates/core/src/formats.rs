//! JSON file formats for classes, varieties and reports, plus the text report.
//!
//! Every number is written as a decimal string. Readers also accept plain
//! JSON integers for hand-written inputs.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exterior::{generators_mask, mask_generators, Multivector};
use crate::hodge::HodgeParameter;
use crate::linalg::{Int, IntMatrix, Rat, RatMatrix};
use crate::suite::{CheckResult, Conventions, ParamRecord, Status, VerificationReport};
use crate::variety::{frobenius_polarization, AbelianVariety};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field `{key}`")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(format!("{what} must be an object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| parse_err(format!("{what} must be a string")))
}

fn int_value(v: &Value, what: &str) -> Result<Int> {
    match v {
        Value::String(s) => Int::from_str(s.trim()).map_err(|_| parse_err(format!("{what}: `{s}` is not an integer"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Int::from_str(&n.to_string()).map_err(|_| parse_err(what.to_string())),
        _ => Err(parse_err(format!("{what} must be a decimal string"))),
    }
}

fn small<T: TryFrom<Int>>(v: &Value, what: &str) -> Result<T> {
    T::try_from(int_value(v, what)?).map_err(|_| parse_err(format!("{what} out of range")))
}

fn rat_value(v: &Value, what: &str) -> Result<Rat> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            let r = Rat::from_str(s).map_err(|_| parse_err(format!("{what}: `{s}` is not a rational \"p/q\"")))?;
            Ok(r)
        }
        _ => Ok(Rat::from_integer(int_value(v, what)?)),
    }
}

fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn matrix_rows(v: &Value, what: &str) -> Result<Vec<Vec<Value>>> {
    let rows = as_array(v, what)?;
    let out: Vec<Vec<Value>> = rows.iter().map(|r| as_array(r, what).cloned()).collect::<Result<_>>()?;
    if let Some(first) = out.first() {
        if out.iter().any(|r| r.len() != first.len()) {
            return Err(parse_err(format!("{what}: rows have different lengths")));
        }
    }
    Ok(out)
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn int_matrix_from_json(v: &Value) -> Result<IntMatrix> {
    let rows = matrix_rows(v, "integer matrix")?;
    let rows: Vec<Vec<Int>> = rows
        .iter()
        .map(|r| r.iter().map(|x| int_value(x, "matrix entry")).collect())
        .collect::<Result<_>>()?;
    Ok(IntMatrix::from_rows(rows))
}

fn rat_matrix_to_json(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|x| Value::String(rat_string(x))).collect()))
            .collect(),
    )
}

fn rat_matrix_from_json(v: &Value) -> Result<RatMatrix> {
    let rows = matrix_rows(v, "complex_structure")?;
    let rows: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| r.iter().map(|x| rat_value(x, "complex_structure entry")).collect())
        .collect::<Result<_>>()?;
    Ok(RatMatrix::from_rows(rows))
}

// ---- classes

pub fn class_to_json(x: &Multivector) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .map(|(mask, c)| {
            json!({
                "generators": mask_generators(mask).iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "coeff": c.to_string(),
            })
        })
        .collect();
    json!({ "rank": x.rank().to_string(), "terms": terms })
}

pub fn class_from_json(v: &Value) -> Result<Multivector> {
    let obj = as_object(v, "class")?;
    let rank: u32 = small(field(obj, "rank")?, "rank")?;
    if rank > 64 {
        return Err(Error::RankTooLarge(rank));
    }
    let mut terms = Vec::new();
    for t in as_array(field(obj, "terms")?, "terms")? {
        let t = as_object(t, "term")?;
        let gens: Vec<u32> = as_array(field(t, "generators")?, "generators")?
            .iter()
            .map(|g| small(g, "generator index"))
            .collect::<Result<_>>()?;
        if gens.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(format!("generators {gens:?} must be strictly increasing")));
        }
        if gens.iter().any(|&g| g >= rank) {
            return Err(parse_err(format!("generator index out of range for rank {rank}")));
        }
        terms.push((generators_mask(&gens), int_value(field(t, "coeff")?, "coeff")?));
    }
    Multivector::from_terms(rank, terms)
}

pub fn emit_class(x: &Multivector) -> String {
    let mut s = serde_json::to_string_pretty(&class_to_json(x)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_class(text: &str) -> Result<Multivector> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("class file: {e}")))?;
    class_from_json(&v)
}

// ---- varieties

pub fn variety_to_json(a: &AbelianVariety) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), Value::String(a.name().to_string()));
    obj.insert("genus".into(), Value::String(a.genus().to_string()));
    if *a.polarization() == frobenius_polarization(a.polarization_type()) {
        let ty = a.polarization_type().iter().map(|d| Value::String(d.to_string())).collect();
        obj.insert("polarization_type".into(), Value::Array(ty));
    } else {
        obj.insert("polarization_matrix".into(), int_matrix_to_json(a.polarization()));
    }
    if let Some(j) = a.complex_structure() {
        obj.insert("complex_structure".into(), rat_matrix_to_json(j));
    }
    Value::Object(obj)
}

pub fn variety_from_json(v: &Value) -> Result<AbelianVariety> {
    let obj = as_object(v, "variety")?;
    let name = obj.get("name").map(|n| as_str(n, "name")).transpose()?.unwrap_or("A").to_string();
    let genus: Option<u32> = obj.get("genus").map(|g| small(g, "genus")).transpose()?;
    let e = match (obj.get("polarization_type"), obj.get("polarization_matrix")) {
        (Some(_), Some(_)) => {
            return Err(parse_err("give exactly one of polarization_type and polarization_matrix"))
        }
        (None, None) => return Err(parse_err("missing polarization_type or polarization_matrix")),
        (Some(t), None) => {
            let delta: Vec<Int> = as_array(t, "polarization_type")?
                .iter()
                .map(|d| int_value(d, "polarization_type entry"))
                .collect::<Result<_>>()?;
            crate::variety::validate_type(&delta)?;
            frobenius_polarization(&delta)
        }
        (None, Some(m)) => int_matrix_from_json(m)?,
    };
    let j = obj.get("complex_structure").map(rat_matrix_from_json).transpose()?;
    let a = AbelianVariety::new(e, j, name)?;
    if let Some(g) = genus {
        if g != a.genus() {
            return Err(parse_err(format!("genus {g} does not match polarization of genus {}", a.genus())));
        }
    }
    Ok(a)
}

pub fn emit_variety(a: &AbelianVariety) -> String {
    let mut s = serde_json::to_string_pretty(&variety_to_json(a)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_variety(text: &str) -> Result<AbelianVariety> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("variety file: {e}")))?;
    variety_from_json(&v)
}

// ---- reports

fn params_to_json(p: &ParamRecord) -> Value {
    let mut obj = Map::new();
    obj.insert("genus".into(), Value::String(p.genus.to_string()));
    obj.insert(
        "type".into(),
        Value::Array(p.polarization_type.iter().map(|d| Value::String(d.to_string())).collect()),
    );
    obj.insert("seed".into(), Value::String(p.seed.to_string()));
    obj.insert("variety".into(), Value::String(p.variety.clone()));
    if let Some(s) = p.samples {
        obj.insert("samples".into(), Value::String(s.to_string()));
    }
    Value::Object(obj)
}

fn params_from_json(v: &Value) -> Result<ParamRecord> {
    let obj = as_object(v, "params")?;
    Ok(ParamRecord {
        genus: small(field(obj, "genus")?, "genus")?,
        polarization_type: as_array(field(obj, "type")?, "type")?
            .iter()
            .map(|d| int_value(d, "type entry"))
            .collect::<Result<_>>()?,
        seed: small(field(obj, "seed")?, "seed")?,
        variety: as_str(field(obj, "variety")?, "variety")?.to_string(),
        samples: obj.get("samples").map(|s| small(s, "samples")).transpose()?,
    })
}

fn result_to_json(r: &CheckResult) -> Value {
    let mut obj = Map::new();
    obj.insert("id".into(), Value::String(r.id.clone()));
    obj.insert("name".into(), Value::String(r.name.clone()));
    obj.insert("anchor".into(), Value::String(r.anchor.clone()));
    obj.insert("params".into(), params_to_json(&r.params));
    obj.insert("status".into(), Value::String(r.status.as_str().into()));
    if let Some(w) = &r.witness {
        obj.insert("witness".into(), class_to_json(w));
    }
    obj.insert("notes".into(), Value::String(r.notes.clone()));
    obj.insert("runtime_us".into(), Value::String(r.runtime_us.to_string()));
    Value::Object(obj)
}

fn result_from_json(v: &Value) -> Result<CheckResult> {
    let obj = as_object(v, "result")?;
    let text = |k: &str| -> Result<String> { Ok(as_str(field(obj, k)?, k)?.to_string()) };
    Ok(CheckResult {
        id: text("id")?,
        name: text("name")?,
        anchor: text("anchor")?,
        params: params_from_json(field(obj, "params")?)?,
        status: Status::parse(as_str(field(obj, "status")?, "status")?)?,
        witness: obj.get("witness").map(class_from_json).transpose()?,
        notes: text("notes")?,
        runtime_us: small(field(obj, "runtime_us")?, "runtime_us")?,
    })
}

fn conventions_to_json(c: &Conventions) -> Value {
    json!({
        "ell_sign": c.ell_sign.to_string(),
        "orientation": c.orientation,
        "hodge_parameter": { "a": c.hodge_parameter.a.to_string(), "b": c.hodge_parameter.b.to_string() },
        "dual_j_sign": c.dual_j_signs.iter().map(|(n, s)| json!({ "variety": n, "sign": s.to_string() })).collect::<Vec<_>>(),
    })
}

fn conventions_from_json(v: &Value) -> Result<Conventions> {
    let obj = as_object(v, "conventions")?;
    let hp = as_object(field(obj, "hodge_parameter")?, "hodge_parameter")?;
    let dual_j_signs = as_array(field(obj, "dual_j_sign")?, "dual_j_sign")?
        .iter()
        .map(|e| {
            let e = as_object(e, "dual_j_sign entry")?;
            Ok((as_str(field(e, "variety")?, "variety")?.to_string(), small(field(e, "sign")?, "sign")?))
        })
        .collect::<Result<_>>()?;
    Ok(Conventions {
        ell_sign: small(field(obj, "ell_sign")?, "ell_sign")?,
        orientation: as_str(field(obj, "orientation")?, "orientation")?.to_string(),
        hodge_parameter: HodgeParameter {
            a: small(field(hp, "a")?, "a")?,
            b: small(field(hp, "b")?, "b")?,
        },
        dual_j_signs,
    })
}

pub fn report_to_json(r: &VerificationReport) -> Value {
    json!({
        "tool_version": r.tool_version,
        "conventions": conventions_to_json(&r.conventions),
        "results": r.results.iter().map(result_to_json).collect::<Vec<_>>(),
        "status": r.status.as_str(),
    })
}

pub fn report_from_json(v: &Value) -> Result<VerificationReport> {
    let obj = as_object(v, "report")?;
    Ok(VerificationReport {
        tool_version: as_str(field(obj, "tool_version")?, "tool_version")?.to_string(),
        conventions: conventions_from_json(field(obj, "conventions")?)?,
        results: as_array(field(obj, "results")?, "results")?
            .iter()
            .map(result_from_json)
            .collect::<Result<_>>()?,
        status: Status::parse(as_str(field(obj, "status")?, "status")?)?,
    })
}

pub fn emit_report_json(r: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(&report_to_json(r)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_report_json(text: &str) -> Result<VerificationReport> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("report: {e}")))?;
    report_from_json(&v)
}

/// One line per check, followed by witnesses of failures and a summary.
pub fn emit_report_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let c = &r.conventions;
    let _ = writeln!(s, "abelfourier {}", r.tool_version);
    let _ = writeln!(
        s,
        "conventions: ell_sign={} hodge=({},{}) orientation: {}",
        c.ell_sign, c.hodge_parameter.a, c.hodge_parameter.b, c.orientation
    );
    for (name, sign) in &c.dual_j_signs {
        let _ = writeln!(s, "dual J sign for {name}: {sign}");
    }
    for res in &r.results {
        let ty: Vec<String> = res.params.polarization_type.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(
            s,
            "{:<4} {:<34} {:<8} {} g={} type=({}) seed={} {}us{}",
            res.id,
            res.name,
            res.status.as_str().to_uppercase(),
            res.params.variety,
            res.params.genus,
            ty.join(","),
            res.params.seed,
            res.runtime_us,
            if res.notes.is_empty() { String::new() } else { format!("  {}", res.notes) }
        );
        if let Some(w) = &res.witness {
            let _ = writeln!(s, "     witness: {w}");
        }
    }
    let _ = writeln!(
        s,
        "status: {} ({} pass, {} fail, {} skipped)",
        r.status.as_str(),
        r.count(Status::Pass),
        r.count(Status::Fail),
        r.count(Status::Skipped)
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite::{run_suite, SuiteConfig};

    #[test]
    fn class_round_trip_is_bit_exact() {
        let x = Multivector::from_terms(4, [(0b0011, Int::from(2)), (0, Int::from(-7)), (0b1111, Int::from(1) << 80)]).unwrap();
        let text = emit_class(&x);
        assert_eq!(parse_class(&text).unwrap(), x);
        assert_eq!(emit_class(&parse_class(&text).unwrap()), text);
        assert!(text.contains("\"coeff\": \"2\""));
    }

    #[test]
    fn class_parse_rejects_bad_input() {
        let unsorted = r#"{"rank":"4","terms":[{"generators":["1","0"],"coeff":"1"}]}"#;
        assert!(matches!(parse_class(unsorted), Err(Error::Parse(_))));
        let out_of_range = r#"{"rank":"2","terms":[{"generators":["3"],"coeff":"1"}]}"#;
        assert!(parse_class(out_of_range).is_err());
        let numeric = r#"{"rank":2,"terms":[{"generators":[0,1],"coeff":5}]}"#;
        assert_eq!(parse_class(numeric).unwrap(), Multivector::monomial(2, 0b11, 5));
    }

    #[test]
    fn variety_files() {
        let a = AbelianVariety::of_type(&[1, 2]).unwrap();
        let back = parse_variety(&emit_variety(&a)).unwrap();
        assert_eq!(back, a);
        let text = r#"{"name":"E","genus":"1","polarization_matrix":[["0","1"],["-1","0"]],
                       "complex_structure":[["0","-1/2"],["2","0"]]}"#;
        let e = parse_variety(text).unwrap();
        assert_eq!(e.genus(), 1);
        let bad = r#"{"name":"bad","genus":"1","polarization_matrix":[["1","1"],["-1","0"]]}"#;
        assert_eq!(parse_variety(bad).unwrap_err(), Error::NotAlternating);
        let both = r#"{"genus":"1","polarization_type":["1"],"polarization_matrix":[["0","1"],["-1","0"]]}"#;
        assert!(matches!(parse_variety(both), Err(Error::Parse(_))));
        let wrong_genus = r#"{"genus":"2","polarization_type":["1"]}"#;
        assert!(matches!(parse_variety(wrong_genus), Err(Error::Parse(_))));
    }

    #[test]
    fn report_round_trip() {
        let mut cfg = SuiteConfig::new(
            vec!["beauville_exp".into(), "ell_integrality".into(), "theta_divided".into()],
            vec![
                AbelianVariety::standard_ppav(1).unwrap(),
                AbelianVariety::of_type(&[1, 2]).unwrap(),
                AbelianVariety::standard_ppav(2).unwrap().with_flipped_orientation().rename("flipped"),
            ],
        );
        cfg.seed = 11;
        let r = run_suite(&cfg).unwrap();
        assert!(r.count(Status::Fail) >= 1);
        let text = emit_report_json(&r);
        assert_eq!(parse_report_json(&text).unwrap(), r);
        assert!(!text.contains(": 0") && !text.contains(": 1"), "numbers must be strings");
        let t = emit_report_text(&r);
        for res in &r.results {
            assert!(t.contains(&res.status.as_str().to_uppercase()));
        }
    }
}
