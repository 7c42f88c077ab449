use crate::model::{Granularity, SmellInstance, SmellKind};

use super::IngestError;

const FORMAT: &str = "Arcan";

/// Delimiters of the Arcan smell table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcanOptions {
    pub delimiter: u8,
    /// Separates entity names inside the `affected_entities` cell.
    pub entity_delimiter: char,
}

impl Default for ArcanOptions {
    fn default() -> Self {
        ArcanOptions {
            delimiter: b',',
            entity_delimiter: ';',
        }
    }
}

/// Parses an Arcan-style smell table. The header must name `smell_type`,
/// `granularity` and `affected_entities`; other columns are ignored.
pub fn parse_arcan(bytes: &[u8], options: &ArcanOptions) -> Result<Vec<SmellInstance>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let headers = reader
        .headers()
        .map_err(|e| IngestError::malformed(FORMAT, e.to_string()))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| IngestError::malformed(FORMAT, format!("missing `{name}` column")))
    };
    let kind_col = column("smell_type")?;
    let granularity_col = column("granularity")?;
    let entities_col = column("affected_entities")?;

    let mut smells = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| IngestError::malformed(FORMAT, e.to_string()))?;
        let line = i + 2;
        let cell = |col: usize| {
            row.get(col)
                .ok_or_else(|| IngestError::malformed(FORMAT, format!("row {line} is too short")))
        };
        let kind_text = cell(kind_col)?;
        let kind: SmellKind = kind_text
            .parse()
            .map_err(|_| IngestError::UnknownSmellKind(kind_text.to_string()))?;
        let granularity: Granularity = cell(granularity_col)?
            .parse()
            .map_err(|e: String| IngestError::malformed(FORMAT, format!("row {line}: {e}")))?;
        let entities = cell(entities_col)?.split(options.entity_delimiter);
        let smell = SmellInstance::new(kind, granularity, entities)
            .map_err(|e| IngestError::malformed(FORMAT, format!("row {line}: {e}")))?;
        smells.push(smell);
    }
    Ok(smells)
}
