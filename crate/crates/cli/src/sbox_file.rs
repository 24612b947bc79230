//! The pnfield-sbox v1 text format.
//!
//! Header line: `# pnfield-sbox v1 p=<p> m=<m> modulus=<int> gamma=<int>
//! n=<table length>`, followed by exactly n whitespace-separated decimal
//! element encodings. Other `#`-prefixed lines are comments. Encodings are
//! decimal everywhere; the declared gamma must match the canonical
//! primitive element of the declared modulus.

use pnfield_core::FieldSpec;

use crate::CliError;

const MAGIC: &str = "# pnfield-sbox v1";

/// A parsed S-box file: the declared field plus the raw table of element
/// encodings over the full field carrier (or a vector-space carrier when
/// the length is a power of the field order).
pub struct SBoxFile {
    pub field: FieldSpec,
    pub table: Vec<u32>,
}

pub fn write_sbox(field: &FieldSpec, table: &[u32]) -> String {
    let mut out = format!(
        "{MAGIC} p={} m={} modulus={} gamma={} n={}\n",
        field.p(),
        field.m(),
        field.modulus(),
        field.gamma(),
        table.len()
    );
    for chunk in table.chunks(16) {
        let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn header_value(part: &str, key: &str) -> Result<u64, CliError> {
    let rest = part
        .strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| CliError::Format(format!("expected {key}=<int>, found {part:?}")))?;
    rest.parse::<u64>()
        .map_err(|_| CliError::Format(format!("bad integer in {part:?}")))
}

pub fn parse_sbox(text: &str) -> Result<SBoxFile, CliError> {
    let mut header: Option<(u64, u32, u64, u64, usize)> = None;
    let mut body: Vec<u32> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(MAGIC) {
            if header.is_some() {
                return Err(CliError::Format("duplicate header line".into()));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 5 {
                return Err(CliError::Format(format!(
                    "header needs p= m= modulus= gamma= n=, found {} fields",
                    parts.len()
                )));
            }
            header = Some((
                header_value(parts[0], "p")?,
                header_value(parts[1], "m")? as u32,
                header_value(parts[2], "modulus")?,
                header_value(parts[3], "gamma")?,
                header_value(parts[4], "n")? as usize,
            ));
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if header.is_none() {
            return Err(CliError::Format(
                "table data before the pnfield-sbox v1 header".into(),
            ));
        }
        for token in line.split_whitespace() {
            let v: u64 = token
                .parse()
                .map_err(|_| CliError::Format(format!("bad table entry {token:?}")))?;
            if v > u32::MAX as u64 {
                return Err(CliError::Format(format!("table entry {v} out of range")));
            }
            body.push(v as u32);
        }
    }
    let (p, m, modulus, gamma, n) = header.ok_or_else(|| {
        CliError::Format("missing pnfield-sbox v1 header".into())
    })?;
    if body.len() != n {
        return Err(CliError::Format(format!(
            "header declares n={n} but the body has {} entries",
            body.len()
        )));
    }
    let field = FieldSpec::build(p, m, Some(modulus))?;
    if field.gamma() != gamma {
        return Err(CliError::Format(format!(
            "declared gamma {gamma} differs from the canonical gamma {}",
            field.gamma()
        )));
    }
    for &v in &body {
        if v as u64 >= field.order() {
            return Err(CliError::Format(format!(
                "table entry {v} outside the field of order {}",
                field.order()
            )));
        }
    }
    Ok(SBoxFile { field, table: body })
}
