use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Which landmarks draw which facial feature.
///
/// The text form has one `group = i, j, k` line per group; `#` starts a
/// comment line and blank lines are ignored. Groups not mentioned are
/// empty, except that `contour` is required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LandmarkRoleMap {
    pub right_brow: Vec<usize>,
    pub left_brow: Vec<usize>,
    pub right_eye: Vec<usize>,
    pub left_eye: Vec<usize>,
    /// Each index is drawn as a circle.
    pub eyeballs: Vec<usize>,
    pub nose: Vec<usize>,
    /// Drawn as a closed polygon in the listed order.
    pub mouth: Vec<usize>,
    /// Points a parabola is fitted through.
    pub contour: Vec<usize>,
}

const GROUPS: [&str; 8] = [
    "right_brow",
    "left_brow",
    "right_eye",
    "left_eye",
    "eyeballs",
    "nose",
    "mouth",
    "contour",
];

impl Default for LandmarkRoleMap {
    /// Best-effort mapping for the 20-point BioID/FGnet markup:
    /// pupils 0-1, mouth corners 2-3, brows 4-7, temples 8 and 13,
    /// eye corners 9-12, nose tip and nostrils 14-16, lips 17-18, chin 19.
    fn default() -> Self {
        Self {
            right_brow: vec![4, 5],
            left_brow: vec![6, 7],
            right_eye: vec![9, 10],
            left_eye: vec![11, 12],
            eyeballs: vec![0, 1],
            nose: vec![15, 14, 16],
            mouth: vec![2, 17, 3, 18],
            contour: vec![8, 19, 13],
        }
    }
}

impl LandmarkRoleMap {
    fn group_mut(&mut self, name: &str) -> Option<&mut Vec<usize>> {
        Some(match name {
            "right_brow" => &mut self.right_brow,
            "left_brow" => &mut self.left_brow,
            "right_eye" => &mut self.right_eye,
            "left_eye" => &mut self.left_eye,
            "eyeballs" => &mut self.eyeballs,
            "nose" => &mut self.nose,
            "mouth" => &mut self.mouth,
            "contour" => &mut self.contour,
            _ => return None,
        })
    }

    pub fn groups(&self) -> [(&'static str, &[usize]); 8] {
        [
            (GROUPS[0], &self.right_brow),
            (GROUPS[1], &self.left_brow),
            (GROUPS[2], &self.right_eye),
            (GROUPS[3], &self.left_eye),
            (GROUPS[4], &self.eyeballs),
            (GROUPS[5], &self.nose),
            (GROUPS[6], &self.mouth),
            (GROUPS[7], &self.contour),
        ]
    }

    /// Parses the `key = indices` text form. `Err` carries the line number.
    pub fn parse(text: &str) -> std::result::Result<Self, (usize, String)> {
        let mut map = LandmarkRoleMap {
            right_brow: vec![],
            left_brow: vec![],
            right_eye: vec![],
            left_eye: vec![],
            eyeballs: vec![],
            nose: vec![],
            mouth: vec![],
            contour: vec![],
        };
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| (ln, format!("expected 'group = indices', found {line:?}")))?;
            let key = key.trim();
            if seen.contains(&key) {
                return Err((ln, format!("group {key:?} given twice")));
            }
            let group = map
                .group_mut(key)
                .ok_or_else(|| (ln, format!("unknown group {key:?}")))?;
            for tok in value.split(',').map(str::trim) {
                if tok.is_empty() {
                    continue;
                }
                let idx = tok
                    .parse()
                    .map_err(|_| (ln, format!("invalid landmark index {tok:?}")))?;
                group.push(idx);
            }
            seen.push(key);
        }
        Ok(map)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|(line, msg)| Error::parse(path, line, msg))
    }

    pub fn to_text(&self) -> String {
        self.groups()
            .iter()
            .map(|(name, idx)| {
                let list: Vec<String> = idx.iter().map(usize::to_string).collect();
                format!("{name} = {}\n", list.join(", "))
            })
            .collect()
    }

    /// Checks the map against a shape with `n_points` landmarks.
    pub fn validate(&self, n_points: usize) -> Result<()> {
        for (name, idx) in self.groups() {
            if let Some(&bad) = idx.iter().find(|&&i| i >= n_points) {
                return Err(Error::arg(format!(
                    "role group {name} references landmark {bad}, shape has {n_points}"
                )));
            }
        }
        if self.contour.len() < 3 {
            return Err(Error::arg(format!(
                "contour group needs at least 3 landmarks for a parabola, has {}",
                self.contour.len()
            )));
        }
        // Features that are drawn as separate strokes must not share points.
        let strokes = [
            &self.right_brow,
            &self.left_brow,
            &self.right_eye,
            &self.left_eye,
            &self.mouth,
        ];
        for (a, ga) in strokes.iter().enumerate() {
            for gb in strokes.iter().skip(a + 1) {
                if let Some(i) = ga.iter().find(|i| gb.contains(i)) {
                    return Err(Error::arg(format!(
                        "landmark {i} appears in two feature groups"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_for_twenty_points() {
        let m = LandmarkRoleMap::default();
        m.validate(20).unwrap();
        assert!(m.validate(19).is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = LandmarkRoleMap::default();
        assert_eq!(LandmarkRoleMap::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn parse_errors_and_comments() {
        let m = LandmarkRoleMap::parse("# face\ncontour = 0, 1,2\n\nnose=3\n").unwrap();
        assert_eq!(m.contour, vec![0, 1, 2]);
        assert_eq!(m.nose, vec![3]);
        assert!(m.mouth.is_empty());
        assert_eq!(LandmarkRoleMap::parse("contour 1 2 3").unwrap_err().0, 1);
        assert_eq!(LandmarkRoleMap::parse("nose = 1\nears = 2").unwrap_err().0, 2);
        assert_eq!(LandmarkRoleMap::parse("nose = x").unwrap_err().0, 1);
        assert!(LandmarkRoleMap::parse("nose = 1\nnose = 2").is_err());
    }

    #[test]
    fn short_contour_and_overlap_rejected() {
        let mut m = LandmarkRoleMap::default();
        m.contour = vec![8, 19];
        assert!(m.validate(20).is_err());
        let mut m = LandmarkRoleMap::default();
        m.mouth.push(4);
        assert!(m.validate(20).is_err());
    }
}
