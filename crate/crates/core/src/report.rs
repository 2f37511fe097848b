//! The full pipeline for a pair `(A, χ)`: matrix facts, walls, the chamber
//! of δ, `Q_χ`, the shifting cone and the flatness certificate.

use serde::Serialize;

use crate::comparability::{shifting_cone_in, ParamSpace, QSet, ShiftCone, DEFAULT_RADIUS};
use crate::error::{Error, Result};
use crate::exactnum::{rational_vec_str, ParamScalar, Rational};
use crate::git_fan::{chamber_of, wall_hyperplanes, ChamberResult, FanSource, WallArrangement};
use crate::lattice::{is_unimodular, kernel_basis, minors_coprime, ActionMatrix, IntMatrix};
use crate::weyl::{moment_ideal, MomentIdeal};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixFacts {
    pub matrix: IntMatrix,
    pub unimodular: bool,
    pub coprime_minors: bool,
    pub b: IntMatrix,
    pub b_zero_rows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanFacts {
    pub walls: WallArrangement,
    #[serde(with = "rational_vec_str")]
    pub delta: Vec<Rational>,
    pub chamber_of_delta: ChamberResult,
    pub chamber_of_chi: ChamberResult,
}

/// Every flag that enters the final verdict, so the verdict can be read off
/// as their conjunction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub unimodular: bool,
    pub delta_generic: bool,
    /// `pr(χ)` lies in the open chamber of δ.
    pub chi_in_chamber: bool,
    pub q_set_complete: bool,
    pub shift_cone_validated: bool,
    pub hypotheses_satisfied: bool,
}

impl Verdicts {
    fn conjunction(&self) -> bool {
        self.unimodular && self.delta_generic && self.chi_in_chamber && self.q_set_complete && self.shift_cone_validated
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub matrix_facts: MatrixFacts,
    pub chi: Vec<ParamScalar>,
    pub fan_facts: FanFacts,
    pub qset: QSet,
    pub inconclusive: bool,
    /// Why the shifting cone was not built, when it was not.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift_cone_skipped: Option<String>,
    pub shift_cone: Option<ShiftCone>,
    pub flatness_certificate: MomentIdeal,
    pub verdicts: Verdicts,
}

pub fn analyze(a: &IntMatrix, chi: &[ParamScalar], delta: &[Rational], radius: Option<u64>) -> Result<AnalysisReport> {
    let accepted = ActionMatrix::new(a.clone())?;
    let d = accepted.d();
    if let Some(len) = [chi.len(), delta.len()].into_iter().find(|&len| len != d) {
        return Err(Error::DimensionMismatch { expected: d, got: len });
    }
    let kb = kernel_basis(a)?;
    let matrix_facts = MatrixFacts {
        matrix: a.clone(),
        unimodular: is_unimodular(a),
        coprime_minors: minors_coprime(a),
        b_zero_rows: kb.zero_rows(),
        b: kb.b,
    };

    let walls = wall_hyperplanes(a, FanSource::FanOnMomentFiber);
    let pr: Vec<Rational> = chi.iter().map(ParamScalar::pr).collect();
    let chamber_of_delta = chamber_of(delta, &walls);
    let chamber_of_chi = chamber_of(&pr, &walls);
    let delta_generic = matches!(chamber_of_delta, ChamberResult::Chamber(_));
    let chi_in_chamber = match (&chamber_of_delta, &chamber_of_chi) {
        (ChamberResult::Chamber(c1), ChamberResult::Chamber(c2)) => c1.signs == c2.signs,
        _ => false,
    };

    let space = ParamSpace::with_radius(a, radius.unwrap_or(DEFAULT_RADIUS));
    let qset = space.q_set(chi)?;

    let mut skipped = None;
    let shift_cone = if !matrix_facts.unimodular {
        skipped = Some("matrix is not unimodular".to_string());
        None
    } else if !chi_in_chamber {
        skipped = Some("pr(chi) is not in the open chamber of delta".to_string());
        None
    } else if qset.partial {
        skipped = Some("Q_chi is only partially decided".to_string());
        None
    } else {
        let ChamberResult::Chamber(c) = &chamber_of_delta else { unreachable!() };
        Some(shifting_cone_in(&space, chi, c)?)
    };

    let mut verdicts = Verdicts {
        unimodular: matrix_facts.unimodular,
        delta_generic,
        chi_in_chamber,
        q_set_complete: !qset.partial,
        shift_cone_validated: shift_cone
            .as_ref()
            .is_some_and(|s| s.checks.iter().all(|c| c.shifted_to_base)),
        hypotheses_satisfied: false,
    };
    verdicts.hypotheses_satisfied = verdicts.conjunction();

    Ok(AnalysisReport {
        matrix_facts,
        chi: chi.to_vec(),
        fan_facts: FanFacts {
            walls,
            delta: delta.to_vec(),
            chamber_of_delta,
            chamber_of_chi,
        },
        inconclusive: qset.partial,
        qset,
        shift_cone_skipped: skipped,
        shift_cone,
        flatness_certificate: moment_ideal(a)?,
        verdicts,
    })
}
