use std::fmt;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Dotted Java-style package name, e.g. `org.example.net`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PackageId(String);

impl PackageId {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        let bad = |reason: &str| ModelError::UnresolvablePackage {
            input: name.clone(),
            reason: reason.to_string(),
        };
        if name.is_empty() {
            return Err(bad("empty package name"));
        }
        if name.contains(['/', '\\']) {
            return Err(bad("package names contain no path separators"));
        }
        if name.split('.').any(|seg| seg.trim().is_empty() || seg != seg.trim()) {
            return Err(bad("empty or padded package segment"));
        }
        Ok(PackageId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PackageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for PackageId {
    type Error = ModelError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        PackageId::new(s)
    }
}

impl From<PackageId> for String {
    fn from(p: PackageId) -> String {
        p.0
    }
}

/// How file paths and class names are attributed to packages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribution {
    /// Source roots stripped from file paths, e.g. `src/main/java`.
    pub source_roots: Vec<String>,
    /// Treat dotted segments starting with an upper-case letter as class
    /// names (so `org.a.Outer.Inner` resolves to `org.a`). When off, exactly
    /// one trailing segment is dropped.
    pub uppercase_classes: bool,
}

impl Default for Attribution {
    fn default() -> Self {
        Attribution {
            source_roots: Vec::new(),
            uppercase_classes: true,
        }
    }
}

impl Attribution {
    pub fn with_roots<I, S>(roots: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Attribution {
            source_roots: roots.into_iter().map(Into::into).collect(),
            ..Attribution::default()
        }
    }
}

/// Resolves the enclosing package of a file path or fully qualified class name.
///
/// Inputs containing a path separator are paths: the longest matching source
/// root is stripped (matched at a segment boundary anywhere in the path), then
/// the file name, and the remaining directories are joined with dots. Relative
/// paths that match no root are used as-is (FindBugs `sourcepath` style).
/// Anything else is a class name.
pub fn derive_package(input: &str, attribution: &Attribution) -> Result<PackageId, ModelError> {
    let unresolvable = |reason: &str| ModelError::UnresolvablePackage {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(unresolvable("empty input"));
    }
    let normalized = trimmed.replace('\\', "/");
    if normalized.contains('/') {
        from_path(&normalized, &attribution.source_roots).ok_or_else(|| {
            unresolvable("no source root matches and the path has no package directories")
        })
    } else {
        from_class_name(&normalized, attribution.uppercase_classes)
            .ok_or_else(|| unresolvable("no package segments before the class name"))
    }
}

fn normalize_root(root: &str) -> String {
    let r = root.trim().replace('\\', "/");
    let r = r.trim_start_matches("./");
    r.trim_end_matches('/').to_string()
}

fn strip_root<'a>(path: &'a str, root: &str) -> Option<&'a str> {
    if root.is_empty() {
        return None;
    }
    if let Some(rest) = path.strip_prefix(root).and_then(|r| r.strip_prefix('/')) {
        return Some(rest);
    }
    let needle = format!("/{root}/");
    path.rfind(&needle).map(|at| &path[at + needle.len()..])
}

fn from_path(path: &str, roots: &[String]) -> Option<PackageId> {
    let path = path.trim_start_matches("./");
    let best = roots
        .iter()
        .map(|r| normalize_root(r))
        .filter_map(|root| strip_root(path, &root).map(|rest| (root.len(), rest)))
        .max_by_key(|(len, _)| *len)
        .map(|(_, rest)| rest);
    let relative = match best {
        Some(rest) => rest,
        None if path.starts_with('/') || path.as_bytes().get(1) == Some(&b':') => return None,
        None => path,
    };
    let mut dirs: Vec<&str> = relative.split('/').filter(|s| !s.is_empty() && *s != ".").collect();
    dirs.pop()?;
    if dirs.is_empty() {
        return None;
    }
    PackageId::new(dirs.join(".")).ok()
}

fn from_class_name(name: &str, uppercase_classes: bool) -> Option<PackageId> {
    let outer = name.split('$').next().unwrap_or(name);
    let mut segments: Vec<&str> = outer.split('.').collect();
    if uppercase_classes {
        let before = segments.len();
        while segments
            .last()
            .is_some_and(|s| s.chars().next().is_some_and(char::is_uppercase))
        {
            segments.pop();
        }
        if segments.len() == before {
            return None;
        }
    } else {
        segments.pop();
    }
    if segments.is_empty() {
        return None;
    }
    PackageId::new(segments.join(".")).ok()
}
