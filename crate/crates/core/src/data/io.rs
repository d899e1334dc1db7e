//! Manifest-driven loading and saving of datasets.
//!
//! A manifest is a JSON document
//!
//! ```json
//! {"source": "stahl94", "unit_factor": 0.025,
//!  "games": ["games/g1.json", "games/g2.json"],
//!  "observations": "observations.csv"}
//! ```
//!
//! where `unit_factor` is the value of one payoff point in dollars (expected
//! value) and paths are relative to the manifest. Game files follow the game
//! JSON layout; their own `unit_factor`, if present, must be 1 or agree with
//! the manifest. Observations are a CSV file with header
//! `game_id,player_role,action_index,count` (roles 1 and 2, actions 0-based).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Observation};
use crate::error::{Error, Result};
use crate::game::{Game, Player};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub source: String,
    /// Dollars per payoff point.
    pub unit_factor: f64,
    pub games: Vec<PathBuf>,
    pub observations: PathBuf,
}

impl DatasetManifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Cents per payoff point.
    pub fn cents_per_point(&self) -> f64 {
        self.unit_factor * 100.0
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ObservationRow {
    game_id: String,
    player_role: u8,
    action_index: usize,
    count: u64,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

pub fn read_game(path: &Path) -> Result<Game> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| parse_error(path, e.to_string()))
}

pub fn read_observations(path: &Path) -> Result<Vec<Observation>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_error(path, e.to_string()))?;
    let headers = reader.headers().map_err(|e| parse_error(path, e.to_string()))?.clone();
    let expected = ["game_id", "player_role", "action_index", "count"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(parse_error(
            path,
            format!("header must be {}, found {}", expected.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let row: ObservationRow = record
            .deserialize(Some(&headers))
            .map_err(|e| parse_error(path, format!("line {line}: {e}")))?;
        let player = Player::from_role(row.player_role).ok_or_else(|| {
            parse_error(path, format!("line {line}: player_role must be 1 or 2, got {}", row.player_role))
        })?;
        out.push(Observation::new(row.game_id, player, row.action_index, row.count));
    }
    Ok(out)
}

/// Loads the dataset described by the manifest at `path`, converting every
/// game's payoffs to expected cents.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let manifest = DatasetManifest::read(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let cents = manifest.cents_per_point();
    if !(cents > 0.0 && cents.is_finite()) {
        return Err(Error::InvalidUnitFactor(manifest.unit_factor));
    }
    let mut games = Vec::with_capacity(manifest.games.len());
    for rel in &manifest.games {
        let game_path = base.join(rel);
        let game = read_game(&game_path)?;
        if game.unit_factor() != 1.0 && game.unit_factor() != cents {
            return Err(parse_error(
                &game_path,
                format!(
                    "unit_factor {} disagrees with the manifest ({} cents per point)",
                    game.unit_factor(),
                    cents
                ),
            ));
        }
        games.push(game.with_unit_factor(cents).normalize_payoffs()?);
    }
    let observations = read_observations(&base.join(&manifest.observations))?;
    Dataset::new(manifest.source, games, observations)
}

fn file_stem(i: usize, id: &str) -> String {
    let clean: String = id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("{i:04}_{clean}.json")
}

/// Writes `dataset` (payoffs already in cents) as a manifest, one JSON file
/// per game and an observation CSV under `dir`. Returns the manifest path.
pub fn save_dataset(dataset: &Dataset, dir: &Path) -> Result<PathBuf> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    let games_dir = dir.join("games");
    fs::create_dir_all(&games_dir).map_err(io(&games_dir))?;
    let mut game_paths = Vec::new();
    for (i, game) in dataset.games().enumerate() {
        let rel = PathBuf::from("games").join(file_stem(i, game.id()));
        let path = dir.join(&rel);
        let text = serde_json::to_string_pretty(&game.with_unit_factor(1.0)).expect("games serialize");
        fs::write(&path, text).map_err(io(&path))?;
        game_paths.push(rel);
    }
    let obs_path = dir.join("observations.csv");
    let mut writer = csv::Writer::from_path(&obs_path).map_err(|e| parse_error(&obs_path, e.to_string()))?;
    for o in dataset.observations() {
        writer
            .serialize(ObservationRow {
                game_id: o.game_id.clone(),
                player_role: o.player.role(),
                action_index: o.action,
                count: o.count,
            })
            .map_err(|e| parse_error(&obs_path, e.to_string()))?;
    }
    writer.flush().map_err(io(&obs_path))?;
    let manifest = DatasetManifest {
        source: dataset.source().to_string(),
        // one cent per point: payoffs are stored in cents already
        unit_factor: 0.01,
        games: game_paths,
        observations: PathBuf::from("observations.csv"),
    };
    let path = dir.join("manifest.json");
    let mut f = fs::File::create(&path).map_err(io(&path))?;
    f.write_all(serde_json::to_string_pretty(&manifest).expect("manifest serializes").as_bytes())
        .map_err(io(&path))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn write_manifest(dir: &Path, dollars: f64, games: &[Game], observations: &str) -> PathBuf {
        fs::create_dir_all(dir.join("games")).unwrap();
        let mut paths = Vec::new();
        for (i, g) in games.iter().enumerate() {
            let rel = PathBuf::from(format!("games/{i}.json"));
            fs::write(dir.join(&rel), serde_json::to_string(g).unwrap()).unwrap();
            paths.push(rel);
        }
        fs::write(dir.join("obs.csv"), observations).unwrap();
        let manifest = DatasetManifest {
            source: "test".into(),
            unit_factor: dollars,
            games: paths,
            observations: "obs.csv".into(),
        };
        let path = dir.join("manifest.json");
        fs::write(&path, serde_json::to_string(&manifest).unwrap()).unwrap();
        path
    }

    const HEADER: &str = "game_id,player_role,action_index,count\n";

    #[test]
    fn counts_are_effective_observations() {
        let dir = tempfile::tempdir().unwrap();
        let obs = format!("{HEADER}prisoners_dilemma,1,0,2\nprisoners_dilemma,1,1,1\nprisoners_dilemma,2,1,2\n");
        let path = write_manifest(dir.path(), 0.01, &[fixtures::prisoners_dilemma()], &obs);
        let d = load_dataset(&path).unwrap();
        assert_eq!(d.total_count(), 5);
        assert_eq!(d.observations().len(), 3);
    }

    #[test]
    fn two_cents_per_point_doubles_payoffs() {
        let dir = tempfile::tempdir().unwrap();
        let g = Game::from_bimatrix("g", &[vec![(50.0, 10.0), (0.0, 0.0)], vec![(0.0, 0.0), (10.0, 50.0)]]).unwrap();
        let path = write_manifest(dir.path(), 0.02, &[g], HEADER);
        let d = load_dataset(&path).unwrap();
        let loaded = d.game("g").unwrap();
        assert_eq!(loaded.payoff(Player::Row, 0, 0), 100.0);
        assert_eq!(loaded.payoff(Player::Col, 1, 1), 100.0);
    }

    #[test]
    fn table_sized_source_loads_with_matching_totals() {
        // ten games and 400 plays at 2.5 cents per point, like the smallest
        // published source
        let dir = tempfile::tempdir().unwrap();
        let games = fixtures::recovery_games();
        let mut obs = HEADER.to_string();
        for k in 0..400 {
            let g = &games[k % 10];
            let role = 1 + (k / 10) % 2;
            let actions = g.num_actions(Player::from_role(role as u8).unwrap());
            obs.push_str(&format!("{},{role},{},1\n", g.id(), k % actions));
        }
        let path = write_manifest(dir.path(), 0.025, &games, &obs);
        let d = load_dataset(&path).unwrap();
        assert_eq!(d.num_games(), 10);
        assert_eq!(d.total_count(), 400);
        let original = &games[3];
        let loaded = d.game(original.id()).unwrap();
        assert_eq!(loaded.payoff(Player::Row, 1, 2), 2.5 * original.payoff(Player::Row, 1, 2));
    }

    #[test]
    fn malformed_rows_report_their_line() {
        let dir = tempfile::tempdir().unwrap();
        let obs = format!("{HEADER}prisoners_dilemma,1,0,2\nprisoners_dilemma,3,0,1\n");
        let path = write_manifest(dir.path(), 0.01, &[fixtures::prisoners_dilemma()], &obs);
        let err = load_dataset(&path).unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("player_role"), "{err}");

        let obs = format!("{HEADER}prisoners_dilemma,1,zero,2\n");
        let path = write_manifest(dir.path(), 0.01, &[fixtures::prisoners_dilemma()], &obs);
        let err = load_dataset(&path).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn dangling_game_references_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let obs = format!("{HEADER}no_such_game,1,0,1\n");
        let path = write_manifest(dir.path(), 0.01, &[fixtures::prisoners_dilemma()], &obs);
        assert!(matches!(load_dataset(&path), Err(Error::UnknownGame(id)) if id == "no_such_game"));
    }

    #[test]
    fn malformed_game_files_report_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_manifest(dir.path(), 0.01, &[fixtures::prisoners_dilemma()], HEADER);
        fs::write(dir.path().join("games/0.json"), "{\n  \"id\": \"x\",\n  \"actions\": oops\n}").unwrap();
        let err = load_dataset(&path).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }
}
