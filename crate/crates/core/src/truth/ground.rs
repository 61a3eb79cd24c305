use super::{interpret, Claim, Missing, Triplet};
use crate::error::{Error, Result};
use crate::grammar::{SemanticForm, TemplateLibrary};
use crate::world::{Law, RuleSet};

fn check(claim: &Claim, law: &Law) -> Result<()> {
    if claim.conditions().into_iter().all(|c| law.speaks_about(c)) {
        Ok(())
    } else {
        Err(Error::UndefinedSemantics(format!("{claim:?}")))
    }
}

fn implies(t: &Triplet, law: &Law) -> bool {
    *t == law.triplet()
}

/// The ground-truth function: does `claim` hold under `law`?
pub fn ground_truth(claim: &Claim, law: &Law) -> Result<bool> {
    check(claim, law)?;
    Ok(match claim {
        Claim::Implies(t) => implies(t, law),
        Claim::NotImplies(t) => !implies(t, law),
        Claim::Independent { cause, effect } => {
            !(cause.subject() == Some(law.cause_subject())
                && effect.subject() == Some(law.effect_subject()))
        }
        Claim::Controls { cause, effect } => {
            cause.subject() == Some(law.cause_subject())
                && effect.subject() == Some(law.effect_subject())
        }
        Claim::Partial { known, missing } => {
            let Law::Recipe {
                ingredient,
                location,
                action,
                output,
            } = law
            else {
                return Err(Error::UndefinedSemantics(format!("{claim:?}")));
            };
            let stated = match missing {
                Missing::Ingredient => super::Condition::At(location.clone()),
                Missing::Location => super::Condition::Has(ingredient.clone()),
            };
            known.pre == stated
                && known.action == super::ActionSeq::Do(*action)
                && known.post == super::Condition::Has(output.clone())
        }
    })
}

/// `G(h, W)` for a parsed hypothesis.
pub fn ground_truth_form(
    lib: &TemplateLibrary,
    form: &SemanticForm,
    ruleset: &RuleSet,
) -> Result<bool> {
    if lib.env_id() != ruleset.env_id {
        return Err(Error::EnvMismatch);
    }
    ground_truth(&interpret(lib, form)?, &ruleset.law)
}
