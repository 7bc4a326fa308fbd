//! Length ranges (`1..=25`, `1..26`, `3-9`, `1,3,9,33`) and noise grids
//! (`0.2:0.3:0.01`, `0.1,0.2`).

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthSet(Vec<usize>);

impl LengthSet {
    pub fn inclusive(lo: usize, hi: usize) -> Self {
        Self((lo..=hi).collect())
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

impl FromStr for LengthSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("'{t}' is not a length"))
        };
        let mut ms = if let Some((a, b)) = s.split_once("..=") {
            (num(a)?..=num(b)?).collect::<Vec<_>>()
        } else if let Some((a, b)) = s.split_once("..") {
            (num(a)?..num(b)?).collect()
        } else if let Some((a, b)) = s.split_once('-') {
            (num(a)?..=num(b)?).collect()
        } else {
            s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        ms.sort_unstable();
        ms.dedup();
        if ms.is_empty() {
            return Err(format!("length range '{s}' is empty"));
        }
        if ms[0] == 0 {
            return Err("lengths start at 1".into());
        }
        Ok(Self(ms))
    }
}

impl fmt::Display for LengthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = (self.0[0], self.0[self.0.len() - 1]);
        if hi - lo + 1 == self.0.len() {
            write!(f, "{lo}..={hi}")
        } else {
            let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseGrid {
    text: String,
    points: Vec<f64>,
}

impl NoiseGrid {
    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

impl FromStr for NoiseGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("'{t}' is not a number"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let points = match parts.as_slice() {
            [start, stop, step] => {
                let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
                if !(step > 0.0) || stop < start {
                    return Err(format!("grid '{s}' needs start <= stop and a positive step"));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                // points from the index, not by accumulation, so grids are reproducible
                (0..=n).map(|i| start + i as f64 * step).collect()
            }
            [list] => list.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
            _ => return Err(format!("grid '{s}' is neither start:stop:step nor a list")),
        };
        Ok(Self {
            text: s.to_string(),
            points,
        })
    }
}

impl fmt::Display for NoiseGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_sets() {
        assert_eq!("1..=4".parse::<LengthSet>().unwrap().values(), &[1, 2, 3, 4]);
        assert_eq!("1..4".parse::<LengthSet>().unwrap().values(), &[1, 2, 3]);
        assert_eq!("3-5".parse::<LengthSet>().unwrap().values(), &[3, 4, 5]);
        assert_eq!("9,1,3,3".parse::<LengthSet>().unwrap().values(), &[1, 3, 9]);
        assert_eq!("1..=25".parse::<LengthSet>().unwrap().to_string(), "1..=25");
        assert_eq!("1,3,9".parse::<LengthSet>().unwrap().to_string(), "1,3,9");
        assert!("0..=3".parse::<LengthSet>().is_err());
        assert!("5..5".parse::<LengthSet>().is_err());
        assert!("a-b".parse::<LengthSet>().is_err());
    }

    #[test]
    fn noise_grids() {
        let g: NoiseGrid = "0.1:0.2:0.05".parse().unwrap();
        assert_eq!(g.points(), &[0.1, 0.15000000000000002, 0.2]);
        let g: NoiseGrid = "0.25,0.3".parse().unwrap();
        assert_eq!(g.points(), &[0.25, 0.3]);
        assert!("0.2:0.1:0.01".parse::<NoiseGrid>().is_err());
        assert!("0:1:0".parse::<NoiseGrid>().is_err());
    }
}
