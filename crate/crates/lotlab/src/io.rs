//! Versioned on-disk formats: structured-text (TOML) manifests and policy
//! files, tab-separated results and report tables.
//!
//! Every format opens with a versioned header line so readers can reject
//! files from a different era instead of mis-parsing them. Writes go to a
//! sibling temp file first and are renamed into place, so a crashed or
//! concurrent run never leaves a half-written artifact behind.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::method::Method;
use crate::policy::Policy;
use crate::sim::Deployment;
use crate::{Error, Result};

pub const MANIFEST_HEADER: &str = "# lotlab manifest v1";
pub const POLICIES_HEADER: &str = "# lotlab policies v1";
pub const RESULTS_HEADER: &str = "# lotlab results v1";
pub const REPORT_HEADER: &str = "# lotlab report v1";

const RESULTS_COLUMNS: &str = "instance\tpattern\tcv\tsetup_cost\tpenalty_cost\tmethod\t\
deployment\tavg_cost\tci_half_width\tgap_pct\treplications\tprecision_reached";

/// Write `text` to `path` atomically (temp file + rename).
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ManifestFile {
    version: u32,
    instances: Vec<Instance>,
}

/// Write an instance manifest.
pub fn write_manifest(path: &Path, instances: &[Instance]) -> Result<()> {
    let body = toml::to_string(&ManifestFile {
        version: 1,
        instances: instances.to_vec(),
    })
    .map_err(|e| Error::Format(format!("manifest serialization failed: {e}")))?;
    write_text(path, &format!("{MANIFEST_HEADER}\n{body}"))
}

/// Read an instance manifest.
pub fn read_manifest(path: &Path) -> Result<Vec<Instance>> {
    let text = std::fs::read_to_string(path)?;
    let file: ManifestFile = toml::from_str(&text)
        .map_err(|e| Error::Format(format!("{}: not a manifest: {e}", path.display())))?;
    if file.version != 1 {
        return Err(Error::Format(format!(
            "{}: manifest version {} unsupported (expected 1)",
            path.display(),
            file.version
        )));
    }
    Ok(file.instances)
}

#[derive(Serialize, Deserialize)]
struct PolicyFile {
    version: u32,
    method: Method,
    policies: Vec<PolicyEntry>,
}

#[derive(Serialize, Deserialize)]
struct PolicyEntry {
    id: String,
    policy: Policy,
}

/// Write per-instance policies solved by one method.
pub fn write_policies(path: &Path, method: Method, entries: &[(String, Policy)]) -> Result<()> {
    let body = toml::to_string(&PolicyFile {
        version: 1,
        method,
        policies: entries
            .iter()
            .map(|(id, policy)| PolicyEntry {
                id: id.clone(),
                policy: policy.clone(),
            })
            .collect(),
    })
    .map_err(|e| Error::Format(format!("policy serialization failed: {e}")))?;
    write_text(path, &format!("{POLICIES_HEADER}\n{body}"))
}

/// Read a policy file back as (method, per-instance policies).
pub fn read_policies(path: &Path) -> Result<(Method, Vec<(String, Policy)>)> {
    let text = std::fs::read_to_string(path)?;
    let file: PolicyFile = toml::from_str(&text)
        .map_err(|e| Error::Format(format!("{}: not a policy file: {e}", path.display())))?;
    if file.version != 1 {
        return Err(Error::Format(format!(
            "{}: policy file version {} unsupported (expected 1)",
            path.display(),
            file.version
        )));
    }
    Ok((
        file.method,
        file.policies
            .into_iter()
            .map(|e| (e.id, e.policy))
            .collect(),
    ))
}

/// One simulated (instance, method, deployment) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub pattern: String,
    pub cv: f64,
    pub setup_cost: f64,
    pub penalty_cost: f64,
    pub method: Method,
    pub deployment: Deployment,
    pub avg_cost: f64,
    pub ci_half_width: f64,
    /// Percentage excess over the simulated optimum under the same seed.
    pub gap_pct: f64,
    pub replications: usize,
    pub precision_reached: bool,
}

/// Write simulation results as tab-separated text.
pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut out = String::with_capacity(64 * (rows.len() + 2));
    out.push_str(RESULTS_HEADER);
    out.push('\n');
    out.push_str(RESULTS_COLUMNS);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.instance,
            r.pattern,
            r.cv,
            r.setup_cost,
            r.penalty_cost,
            r.method,
            r.deployment,
            r.avg_cost,
            r.ci_half_width,
            r.gap_pct,
            r.replications,
            r.precision_reached
        ));
    }
    write_text(path, &out)
}

/// Read a results file back.
pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == RESULTS_HEADER => {}
        other => {
            return Err(Error::Format(format!(
                "{}: expected results header '{RESULTS_HEADER}', found {:?}",
                path.display(),
                other.unwrap_or("<empty>")
            )));
        }
    }
    match lines.next() {
        Some(columns) if columns == RESULTS_COLUMNS => {}
        other => {
            return Err(Error::Format(format!(
                "{}: unexpected results columns {:?}",
                path.display(),
                other.unwrap_or("<empty>")
            )));
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        rows.push(parse_result_row(line).map_err(|e| {
            Error::Format(format!("{} line {}: {e}", path.display(), i + 3))
        })?);
    }
    Ok(rows)
}

fn parse_result_row(line: &str) -> std::result::Result<ResultRow, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 12 {
        return Err(format!("expected 12 fields, found {}", fields.len()));
    }
    fn num(s: &str, what: &str) -> std::result::Result<f64, String> {
        s.parse().map_err(|_| format!("bad {what} '{s}'"))
    }
    Ok(ResultRow {
        instance: fields[0].to_string(),
        pattern: fields[1].to_string(),
        cv: num(fields[2], "cv")?,
        setup_cost: num(fields[3], "setup_cost")?,
        penalty_cost: num(fields[4], "penalty_cost")?,
        method: fields[5].parse().map_err(|e: Error| e.to_string())?,
        deployment: fields[6].parse().map_err(|e: Error| e.to_string())?,
        avg_cost: num(fields[7], "avg_cost")?,
        ci_half_width: num(fields[8], "ci_half_width")?,
        gap_pct: num(fields[9], "gap_pct")?,
        replications: fields[10]
            .parse()
            .map_err(|_| format!("bad replications '{}'", fields[10]))?,
        precision_reached: match fields[11] {
            "true" => true,
            "false" => false,
            other => return Err(format!("bad precision_reached '{other}'")),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_test_bed;
    use crate::policy::SsPolicy;

    #[test]
    fn manifest_round_trips_and_is_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bed.toml");
        let bed: Vec<Instance> = generate_test_bed().into_iter().take(5).collect();
        write_manifest(&path, &bed).unwrap();
        let first = std::fs::read(&path).unwrap();
        assert_eq!(read_manifest(&path).unwrap(), bed);
        write_manifest(&path, &bed).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), first, "rewrites are identical");
        assert!(String::from_utf8(first).unwrap().starts_with(MANIFEST_HEADER));
    }

    #[test]
    fn policies_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sdp.toml");
        let policy = Policy::Ss(SsPolicy::new(vec![10.0, 20.0], vec![50.0, 60.0]).unwrap());
        write_policies(&path, Method::Sdp, &[("inst-1".into(), policy.clone())]).unwrap();
        let (method, entries) = read_policies(&path).unwrap();
        assert_eq!(method, Method::Sdp);
        assert_eq!(entries, vec![("inst-1".to_string(), policy)]);
    }

    #[test]
    fn results_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.tsv");
        let rows = vec![ResultRow {
            instance: "STA-cv0.10-K250-b2".into(),
            pattern: "STA".into(),
            cv: 0.1,
            setup_cost: 250.0,
            penalty_cost: 2.0,
            method: Method::Tar,
            deployment: Deployment::Replanning,
            avg_cost: 4321.0625,
            ci_half_width: 4.25,
            gap_pct: 1.375,
            replications: 13_000,
            precision_reached: true,
        }];
        write_results(&path, &rows).unwrap();
        // Shortest-round-trip float formatting keeps the parse bit-exact.
        assert_eq!(read_results(&path).unwrap(), rows);
    }

    #[test]
    fn wrong_version_or_shape_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.tsv");
        std::fs::write(&path, "# lotlab results v9\n").unwrap();
        assert!(matches!(read_results(&path), Err(Error::Format(_))));
        let manifest = dir.path().join("bed.toml");
        std::fs::write(&manifest, "version = 99\ninstances = []\n").unwrap();
        assert!(matches!(read_manifest(&manifest), Err(Error::Format(_))));
    }
}
