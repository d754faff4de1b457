//! Line-oriented dataset format. See `data/guidelines.txt` for the grammar.

use super::{parse_set_list, Category, Decidability, Guideline, GuidelineId, Scope};
use crate::error::DbError;

/// Returns each record with its 1-based line number.
pub(crate) fn parse_dataset(text: &str) -> Result<Vec<(usize, Guideline)>, DbError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let err = |reason: String| DbError::Dataset {
            line: line_no,
            reason,
        };
        let content = raw.split('#').next().unwrap_or("");
        let (record, note) = match content.split_once('|') {
            Some((record, note)) => (record.trim(), Some(note.trim())),
            None => (content.trim(), None),
        };
        if record.is_empty() {
            if note.is_some_and(|n| !n.is_empty()) {
                return Err(err("note without a record".into()));
            }
            continue;
        }
        let fields: Vec<&str> = record.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        }
        let id = GuidelineId::parse(fields[0]).map_err(|e| err(e.to_string()))?;
        let category: Category = fields[1].parse().map_err(err)?;
        let decidability = match fields[2] {
            "decidable" => Decidability::Decidable,
            "undecidable" => Decidability::Undecidable,
            "NA" => Decidability::NotApplicable,
            "?" => Decidability::Unknown,
            other => return Err(err(format!("unknown decidability `{other}`"))),
        };
        let scope = match fields[3] {
            "stu" => Scope::SingleTranslationUnit,
            "system" => Scope::System,
            "?" => Scope::Unknown,
            other => return Err(err(format!("unknown scope `{other}`"))),
        };
        let sets = parse_set_list(fields[4]).map_err(|e| err(e.to_string()))?;
        let mut guideline = Guideline::new(id, category, decidability, scope, sets);
        guideline.note = note.filter(|n| !n.is_empty()).map(str::to_string);
        out.push((line_no, guideline));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guideline_db::RationaleSet;

    #[test]
    fn parses_records_comments_and_notes() {
        let text = "# header\n\nR9.1 mandatory undecidable system LTLM # trailing\n\
                    D4.6 advisory NA ? PORT | local summary\nR6.1 ? ? ? PORT,LTLM\n";
        let parsed: Vec<Guideline> = parse_dataset(text)
            .unwrap()
            .into_iter()
            .map(|(_, g)| g)
            .collect();
        assert_eq!(parsed.len(), 3);
        assert_eq!(parsed[0].category, Category::Mandatory);
        assert_eq!(parsed[0].scope, Scope::System);
        assert_eq!(parsed[1].decidability, Decidability::NotApplicable);
        assert_eq!(parsed[1].note.as_deref(), Some("local summary"));
        assert_eq!(parsed[2].category, Category::Unknown);
        assert_eq!(
            parsed[2].rationale_sets,
            vec![RationaleSet::PORT, RationaleSet::LTLM]
        );
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_dataset("R1.1 required decidable stu LTLM\nR1.2 required decidable\n")
            .unwrap_err();
        assert!(matches!(err, DbError::Dataset { line: 2, .. }));
        let err = parse_dataset("R1.1 required decidable stu XXXX\n").unwrap_err();
        assert!(matches!(err, DbError::Dataset { line: 1, .. }));
        let err = parse_dataset("R1.1 sometimes decidable stu LTLM\n").unwrap_err();
        assert!(matches!(err, DbError::Dataset { line: 1, .. }));
    }
}
