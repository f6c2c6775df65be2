//! Maps a question about a pattern pair (time domain, time variation,
//! direction, horizon) to the graph conditions that answer it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conditions::{check_with, Condition, SmallestIndex, Verdict};
use crate::error::{Error, Result};
use crate::pattern::Pattern;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeDomain {
    Discrete,
    Continuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variation {
    TimeInvariant,
    TimeVarying,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Controllability,
    Observability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Guaranteed,
    NotGuaranteed,
    Undecided,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Guaranteed => "guaranteed",
            Answer::NotGuaranteed => "not-guaranteed",
            Answer::Undecided => "undecided",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What is being asked of a pattern pair.
///
/// `horizon` is the window length `T = t1 - t0` of a discrete-time question.
/// Discrete time-varying questions need one; continuous questions reject it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Query {
    pub time_domain: TimeDomain,
    pub variation: Variation,
    pub direction: Direction,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub horizon: Option<usize>,
}

impl Query {
    pub fn new(
        time_domain: TimeDomain,
        variation: Variation,
        direction: Direction,
        horizon: Option<usize>,
    ) -> Result<Self> {
        let q = Query {
            time_domain,
            variation,
            direction,
            horizon,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.time_domain, self.variation, self.horizon) {
            (_, _, Some(0)) => Err(Error::InvalidHorizon),
            (TimeDomain::Continuous, _, Some(_)) => Err(Error::InvalidQuery(
                "a horizon only applies to discrete-time questions".into(),
            )),
            (TimeDomain::Discrete, Variation::TimeVarying, None) => {
                Err(Error::MissingHorizon("a discrete time-varying question"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub query: Query,
    pub answer: Answer,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn verdict(&self, condition: Condition) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.condition == condition)
    }
}

/// `(a', c')`: the state and input patterns whose controllability verdicts
/// are the observability verdicts of `(a, c)`.
pub fn dualize(a: &Pattern, c: &Pattern) -> Result<(Pattern, Pattern)> {
    if !a.is_square() || c.cols() != a.rows() {
        return Err(Error::Dimension(format!(
            "cannot pair state pattern {}x{} with output pattern {}x{}",
            a.rows(),
            a.cols(),
            c.rows(),
            c.cols()
        )));
    }
    Ok((a.transpose(), c.transpose()))
}

pub fn analyze_controllability(a: &Pattern, b: &Pattern, q: &Query) -> Result<Report> {
    if q.direction != Direction::Controllability {
        return Err(Error::InvalidQuery(
            "analyze_controllability needs a controllability query".into(),
        ));
    }
    analyze(a, b, q, false)
}

pub fn analyze_observability(a: &Pattern, c: &Pattern, q: &Query) -> Result<Report> {
    if q.direction != Direction::Observability {
        return Err(Error::InvalidQuery(
            "analyze_observability needs an observability query".into(),
        ));
    }
    analyze(a, c, q, false)
}

/// Answers `q` for `(a, other)`, where `other` is the input pattern of a
/// controllability query and the output pattern of an observability query.
/// With `traced`, every verdict carries its reduction trace.
pub fn analyze(a: &Pattern, other: &Pattern, q: &Query, traced: bool) -> Result<Report> {
    q.validate()?;
    let mut notes = Vec::new();
    let (a, b) = match q.direction {
        Direction::Controllability => {
            if !a.is_square() || other.rows() != a.rows() {
                return Err(Error::Dimension(format!(
                    "cannot pair state pattern {}x{} with input pattern {}x{}",
                    a.rows(),
                    a.cols(),
                    other.rows(),
                    other.cols()
                )));
            }
            (a.clone(), other.clone())
        }
        Direction::Observability => {
            notes.push(
                "observability of (A, C) is decided as controllability of the transposed pair \
                 (A', C'); witness vertices refer to the graph of that pair"
                    .to_string(),
            );
            notes.push(
                "duality holds for the verdict over all systems of the pattern, not system by \
                 system: a particular system and its plain transpose can differ"
                    .to_string(),
            );
            dualize(a, other)?
        }
    };
    let n = a.rows();
    let run = |cond: Condition, horizon: Option<usize>| {
        check_with(cond, &a, &b, horizon, &mut SmallestIndex, traced)
    };

    let (answer, verdicts) = match (q.time_domain, q.variation, q.horizon) {
        (_, Variation::TimeInvariant, None) => {
            notes.push("time-invariant systems: all controllable iff G1 and G2 hold".into());
            let v = vec![run(Condition::G1, None)?, run(Condition::G2, None)?];
            (all_hold(&v), v)
        }
        (TimeDomain::Discrete, Variation::TimeInvariant, Some(t)) if t >= n => {
            notes.push(format!(
                "time-invariant systems on windows of length {t} >= n = {n}: all controllable \
                 iff G1 and G2 hold"
            ));
            let v = vec![run(Condition::G1, None)?, run(Condition::G2, None)?];
            (all_hold(&v), v)
        }
        (TimeDomain::Discrete, Variation::TimeInvariant, Some(t)) => {
            notes.push(format!(
                "time-invariant systems on windows of length {t} < n = {n}: G3 at {t} is \
                 sufficient and G1 and G2 are necessary; no exact condition is known in between"
            ));
            let v = vec![
                run(Condition::G1, None)?,
                run(Condition::G2, None)?,
                run(Condition::G3, Some(t))?,
            ];
            let answer = if !(v[0].holds && v[1].holds) {
                Answer::NotGuaranteed
            } else if v[2].holds {
                Answer::Guaranteed
            } else {
                Answer::Undecided
            };
            (answer, v)
        }
        (TimeDomain::Discrete, Variation::TimeVarying, Some(t)) => {
            notes.push(format!(
                "discrete time-varying systems: all controllable on every window of length {t} \
                 iff G3 holds at {t}"
            ));
            let g3 = run(Condition::G3, Some(t))?;
            let answer = all_hold(std::slice::from_ref(&g3));
            let mut v = vec![g3];
            if t >= n {
                notes.push(format!(
                    "for windows of length {t} >= n = {n}, G3 is equivalent to G1 and G2"
                ));
                v.push(run(Condition::G1, None)?);
                v.push(run(Condition::G2, None)?);
            }
            (answer, v)
        }
        (TimeDomain::Continuous, Variation::TimeVarying, None) => {
            notes.push(
                "continuous time-varying systems: all controllable iff G4 holds, equivalently \
                 G2 on the pattern with every diagonal entry set"
                    .into(),
            );
            let v = vec![run(Condition::G4, None)?];
            (all_hold(&v), v)
        }
        _ => unreachable!("rejected by Query::validate"),
    };
    Ok(Report {
        query: *q,
        answer,
        verdicts,
        notes,
    })
}

fn all_hold(verdicts: &[Verdict]) -> Answer {
    if verdicts.iter().all(|v| v.holds) {
        Answer::Guaranteed
    } else {
        Answer::NotGuaranteed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sgraph::VertexSet;

    fn q(domain: TimeDomain, variation: Variation, dir: Direction, h: Option<usize>) -> Query {
        Query::new(domain, variation, dir, h).unwrap()
    }

    fn ctrl(domain: TimeDomain, variation: Variation, h: Option<usize>) -> Query {
        q(domain, variation, Direction::Controllability, h)
    }

    fn obs(domain: TimeDomain, variation: Variation, h: Option<usize>) -> Query {
        q(domain, variation, Direction::Observability, h)
    }

    use Direction::*;
    use TimeDomain::*;
    use Variation::*;

    #[test]
    fn query_validation() {
        assert!(matches!(
            Query::new(Discrete, TimeVarying, Controllability, None),
            Err(Error::MissingHorizon(_))
        ));
        assert!(matches!(
            Query::new(Discrete, TimeVarying, Controllability, Some(0)),
            Err(Error::InvalidHorizon)
        ));
        assert!(Query::new(Continuous, TimeVarying, Controllability, Some(3)).is_err());
        assert!(Query::new(Continuous, TimeInvariant, Observability, Some(3)).is_err());
        assert!(Query::new(Discrete, TimeInvariant, Controllability, Some(3)).is_ok());
    }

    #[test]
    fn dualize_transposes() {
        let (a, _) = catalog::diagonal_pair();
        let c = Pattern::from_nonzeros(1, 2, &[(0, 0)]).unwrap();
        let (at, ct) = dualize(&a, &c).unwrap();
        assert_eq!(at, a.transpose());
        assert_eq!(ct, Pattern::from_nonzeros(2, 1, &[(0, 0)]).unwrap());
        assert_eq!((at.transpose(), ct.transpose()), (a.clone(), c.clone()));
        assert!(dualize(&a, &Pattern::full(1, 3)).is_err());

        let (_, b) = dualize(&Pattern::full(2, 2), &Pattern::full(1, 2)).unwrap();
        assert_eq!(b, Pattern::full(2, 1));
    }

    #[test]
    fn six_state_horizons() {
        let (a, b) = catalog::six_state_pair();
        let r = analyze_controllability(&a, &b, &ctrl(Discrete, TimeVarying, Some(6))).unwrap();
        assert_eq!(r.answer, Answer::Guaranteed);
        assert!(r.verdict(Condition::G1).unwrap().holds);

        let r = analyze_controllability(&a, &b, &ctrl(Discrete, TimeVarying, Some(3))).unwrap();
        assert_eq!(r.answer, Answer::NotGuaranteed);
        let g3 = r.verdict(Condition::G3).unwrap();
        assert_eq!(g3.horizon, Some(3));
        assert!(!g3.witness.as_ref().unwrap().is_empty());
        assert!(r.verdict(Condition::G1).is_none());
    }

    #[test]
    fn chain3_continuous_gap() {
        let (a, b) = catalog::chain3_pair();
        let tv = analyze(&a, &b, &ctrl(Continuous, TimeVarying, None), false).unwrap();
        assert_eq!(tv.answer, Answer::NotGuaranteed);
        let ti = analyze(&a, &b, &ctrl(Continuous, TimeInvariant, None), false).unwrap();
        assert_eq!(ti.answer, Answer::Guaranteed);
    }

    #[test]
    fn short_window_time_invariant_cases() {
        // six-state pair: G1, G2 hold, G3 fails at 3 and holds at 4
        let (a, b) = catalog::six_state_pair();
        let r = analyze(&a, &b, &ctrl(Discrete, TimeInvariant, Some(3)), false).unwrap();
        assert_eq!(r.answer, Answer::Undecided);
        let r = analyze(&a, &b, &ctrl(Discrete, TimeInvariant, Some(6)), false).unwrap();
        assert_eq!(r.answer, Answer::Guaranteed);
        assert_eq!(r.verdicts.len(), 2);

        // a single input driving two decoupled integrators fails G1 outright
        let a = Pattern::zeros(2, 2);
        let b = Pattern::full(2, 1);
        let r = analyze(&a, &b, &ctrl(Discrete, TimeInvariant, Some(1)), false).unwrap();
        assert_eq!(r.answer, Answer::NotGuaranteed);

        // each state with its own input: guaranteed from a single step
        let r = analyze(
            &Pattern::full(3, 3),
            &Pattern::identity(3),
            &ctrl(Discrete, TimeInvariant, Some(1)),
            false,
        )
        .unwrap();
        assert_eq!(r.answer, Answer::Guaranteed);
    }

    #[test]
    fn observability_examples() {
        // the duality-gap system realizes this pattern and is unobservable
        for h in [2, 4] {
            let r = analyze_observability(
                &Pattern::full(2, 2),
                &Pattern::full(1, 2),
                &obs(Discrete, TimeVarying, Some(h)),
            )
            .unwrap();
            assert_eq!(r.answer, Answer::NotGuaranteed);
            assert!(r.notes.iter().any(|n| n.contains("system by system")));
        }
        let r = analyze_observability(
            &Pattern::full(2, 2),
            &Pattern::identity(2),
            &obs(Discrete, TimeVarying, Some(1)),
        )
        .unwrap();
        assert_eq!(r.answer, Answer::Guaranteed);

        for a in [
            Pattern::full(3, 3),
            Pattern::identity(3),
            Pattern::zeros(3, 3),
        ] {
            for query in [
                obs(Discrete, TimeInvariant, None),
                obs(Continuous, TimeVarying, None),
                obs(Discrete, TimeVarying, Some(4)),
            ] {
                let r = analyze_observability(&a, &Pattern::zeros(2, 3), &query).unwrap();
                assert_eq!(r.answer, Answer::NotGuaranteed);
            }
        }

        let (a, b) = catalog::six_state_pair();
        let r = analyze_observability(
            &a.transpose(),
            &b.transpose(),
            &obs(Discrete, TimeInvariant, None),
        )
        .unwrap();
        assert_eq!(r.answer, Answer::Guaranteed);
    }

    #[test]
    fn direction_mismatch_rejected() {
        let (a, b) = catalog::diagonal_pair();
        assert!(analyze_controllability(&a, &b, &obs(Continuous, TimeInvariant, None)).is_err());
        assert!(analyze_observability(&a, &b, &ctrl(Continuous, TimeInvariant, None)).is_err());
        assert!(analyze(
            &a,
            &Pattern::full(3, 1),
            &ctrl(Continuous, TimeInvariant, None),
            false
        )
        .is_err());
    }

    #[test]
    fn json_shape() {
        let (a, b) = catalog::diagonal_pair();
        let r = analyze(&a, &b, &ctrl(Continuous, TimeVarying, None), false).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "query": {
                    "time_domain": "continuous",
                    "variation": "time-varying",
                    "direction": "controllability"
                },
                "answer": "not-guaranteed",
                "verdicts": [{"condition": "G4", "holds": false, "witness": [1, 2]}],
                "notes": [r.notes[0].clone()]
            })
        );
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let text = r.to_json();
        let positions: Vec<_> = ["\"query\"", "\"answer\"", "\"verdicts\"", "\"notes\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{keys:?}");
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn traced_reports_carry_traces() {
        let (a, b) = catalog::six_state_pair();
        let r = analyze(&a, &b, &ctrl(Discrete, TimeInvariant, None), true).unwrap();
        assert!(r
            .verdicts
            .iter()
            .all(|v| v.trace.as_ref().is_some_and(|t| !t.is_empty())));
        let plain = analyze(&a, &b, &ctrl(Discrete, TimeInvariant, None), false).unwrap();
        assert!(plain.verdicts.iter().all(|v| v.trace.is_none()));
        assert_eq!(
            r.verdicts[0].witness.clone().unwrap_or_default(),
            VertexSet::new()
        );
    }
}
