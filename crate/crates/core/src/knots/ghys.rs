//! Cross-check of one periodic orbit across the three codings: the integer
//! matrix of the word, the closed geodesic on the deformed modular surface,
//! and the periodic orbit of the geometric model. The Lorenz knot of the word
//! is attached as a certificate.

use serde::Serialize;
use thiserror::Error;

use super::braid::{alexander_from_braid, genus_positive_braid, lorenz_braid, Braid};
use super::{word_to_matrix, AlexanderPoly, KnotError, Letter, LorenzWord};
use crate::model::{self, ModelParams, ReturnMapPoint};
use crate::modular::{self, CrossSection, ModularError, Representation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GhysError {
    #[error(transparent)]
    Knot(#[from] KnotError),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnotCertificate {
    pub braid: Braid,
    pub genus: i64,
    pub alexander: AlexanderPoly,
}

pub fn knot_certificate(w: &LorenzWord) -> Result<KnotCertificate, KnotError> {
    let braid = lorenz_braid(w)?;
    let alexander = alexander_from_braid(&braid)?;
    let genus = genus_positive_braid(&braid)?;
    Ok(KnotCertificate { braid, genus, alexander })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhysReport {
    pub word: String,
    pub trace: i128,
    /// Deformed word matrix has the same conjugacy type (hyperbolic, and
    /// projectively equal to the integer matrix at l = 0).
    pub matrix_consistent: bool,
    pub modular_itinerary: String,
    pub model_itinerary: String,
    pub return_time: f64,
    pub geodesic_length: f64,
    pub agree: bool,
    pub certificate: KnotCertificate,
}

fn word_string(ls: &[Letter]) -> String {
    ls.iter().map(|l| l.as_char()).collect()
}

pub fn ghys_word_check(
    w: &LorenzWord,
    rep: &Representation,
    sec: &CrossSection,
    mp: &ModelParams,
) -> Result<GhysReport, GhysError> {
    if !w.is_mixed() {
        return Err(KnotError::NotMixed(w.to_string()).into());
    }
    if !w.is_primitive() {
        return Err(KnotError::NotPrimitive(w.to_string()).into());
    }
    let n = w.len();
    let mw = word_to_matrix(w);
    let deformed = rep.word_matrix(w.letters());
    let matrix_consistent = deformed.trace().abs() > 2.0
        && (rep.l > 0.0 || deformed.proj_eq(&mw.to_matrix2(), 1e-9));

    let seed = modular::periodic_seed(rep, sec, w)?;
    let steps = modular::orbit(rep, sec, &seed.point, n, 50.0)?;
    let modular_letters: Vec<Letter> = steps.iter().map(|s| s.letter).collect();
    let return_time = steps.iter().map(|s| s.time).sum();

    let p = model::periodic_orbit_from_word(w, mp);
    let model_letters = model::itinerary(&ReturnMapPoint::alive(p.x, p.y), n, mp);

    let cyc = |ls: &[Letter]| LorenzWord::new(ls.to_vec()).map(|v| v.cyclically_equal(w)).unwrap_or(false);
    let agree = matrix_consistent && cyc(&modular_letters) && cyc(&model_letters);
    Ok(GhysReport {
        word: w.to_string(),
        trace: mw.trace(),
        matrix_consistent,
        modular_itinerary: word_string(&modular_letters),
        model_itinerary: word_string(&model_letters),
        return_time,
        geodesic_length: seed.length,
        agree,
        certificate: knot_certificate(w)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{build_representation, section_geometry};

    #[test]
    fn short_words_agree() {
        let rep = build_representation(0.5).unwrap();
        let sec = section_geometry(&rep).unwrap();
        let mp = ModelParams::default();
        let lr = ghys_word_check(&"LR".parse().unwrap(), &rep, &sec, &mp).unwrap();
        assert!(lr.agree, "{lr:?}");
        assert_eq!(lr.certificate.alexander, AlexanderPoly::unknot());
        assert_eq!(lr.certificate.genus, 0);
        let a = ghys_word_check(&"LLR".parse().unwrap(), &rep, &sec, &mp).unwrap();
        let b = ghys_word_check(&"LRR".parse().unwrap(), &rep, &sec, &mp).unwrap();
        assert!(a.agree && b.agree);
        let flipped: LorenzWord = a.modular_itinerary.parse().unwrap();
        assert!(flipped.flipped().cyclically_equal(&b.modular_itinerary.parse().unwrap()));
        assert!(ghys_word_check(&"RRR".parse().unwrap(), &rep, &sec, &mp).is_err());
    }
}
