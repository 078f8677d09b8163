//! Text dump of a game, one position per line:
//!
//! ```text
//! <id> <V|R> <priority> <succ,succ,...|-> [label]
//! ```
//!
//! Ids must be `0..n` in order; `-` marks a dead end; lines starting with `#`
//! are comments.

use std::fmt::Write;

use super::{ParityGame, Player, PositionId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct DumpError {
    pub line: usize,
    pub message: String,
}

pub fn dump_game(game: &ParityGame, label: impl Fn(PositionId) -> String) -> String {
    let mut out = String::new();
    for v in game.positions() {
        let owner = match game.owner(v) {
            Player::Verifier => 'V',
            Player::Refuter => 'R',
        };
        let succ = if game.successors(v).is_empty() {
            "-".to_string()
        } else {
            game.successors(v)
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = write!(out, "{v} {owner} {} {succ}", game.priority(v));
        let l = label(v);
        if !l.is_empty() {
            let _ = write!(out, " {l}");
        }
        out.push('\n');
    }
    out
}

/// Parses a dump back into a game and its labels.
pub fn parse_game(text: &str) -> Result<(ParityGame, Vec<String>), DumpError> {
    let mut game = ParityGame::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| DumpError { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.splitn(5, char::is_whitespace);
        let mut field = |name: &str| parts.next().ok_or_else(|| err(format!("missing {name}")));
        let id: usize = field("id")?.parse().map_err(|_| err("bad id".into()))?;
        if id != game.len() {
            return Err(err(format!("expected id {}, found {id}", game.len())));
        }
        let owner = match field("owner")? {
            "V" => Player::Verifier,
            "R" => Player::Refuter,
            o => return Err(err(format!("owner must be V or R, found `{o}`"))),
        };
        let priority: usize = field("priority")?.parse().map_err(|_| err("bad priority".into()))?;
        let succ = field("successors")?;
        let label = parts.next().unwrap_or("").trim().to_string();
        game.add_position(owner, priority);
        labels.push(label);
        if succ != "-" {
            for s in succ.split(',') {
                let w: usize = s.parse().map_err(|_| err(format!("bad successor `{s}`")))?;
                edges.push((line, id, w));
            }
        }
    }
    for (line, v, w) in edges {
        if w >= game.len() {
            return Err(DumpError {
                line,
                message: format!("successor {w} is not a position"),
            });
        }
        game.add_edge(v, w);
    }
    Ok((game, labels))
}
