use std::sync::Arc;

use indexmap::IndexMap;

use super::ast::{DeclKind, OpAst, Program, RelAst, SetLit};
use super::DslError;
use crate::error::Error;
use crate::optable::{OperatorExpr, OperatorTable, RelExpr};
use crate::relalg::Relation;
use crate::setcore::{SubsetFamily, Universe, DEFAULT_CAP};

/// Evaluated declarations, in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    pub universes: IndexMap<String, Arc<Universe>>,
    pub relations: IndexMap<String, Relation>,
    pub operators: IndexMap<String, OperatorTable>,
}

impl Environment {
    pub fn operator(&self, name: &str) -> Option<&OperatorTable> {
        self.operators.get(name)
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn universe(&self, name: &str) -> Option<&Arc<Universe>> {
        self.universes.get(name)
    }
}

pub fn eval(p: &Program) -> Result<Environment, DslError> {
    eval_with_cap(p, DEFAULT_CAP)
}

pub fn eval_with_cap(p: &Program, cap: usize) -> Result<Environment, DslError> {
    let mut env = Environment::default();
    for d in &p.decls {
        let at = |source: Error| DslError::Eval {
            pos: d.span.start,
            name: d.kind.name().to_string(),
            source,
        };
        match &d.kind {
            DeclKind::Universe { name, labels } => {
                let u = Universe::with_cap(name, labels, cap).map_err(at)?;
                env.universes.insert(name.clone(), u);
            }
            DeclKind::Relation {
                name,
                source,
                target,
                pairs,
            } => {
                let r = Relation::from_pairs(
                    Arc::clone(&env.universes[source]),
                    Arc::clone(&env.universes[target]),
                    pairs,
                )
                .map_err(at)?;
                env.relations.insert(name.clone(), r);
            }
            DeclKind::Operator {
                name,
                domain,
                codomain,
                expr,
            } => {
                let dom = Arc::clone(&env.universes[domain]);
                let cod = Arc::clone(&env.universes[codomain.as_ref().unwrap_or(domain)]);
                let e = lower(&env, expr, &dom, &cod).map_err(at)?;
                let table = e.materialize().map_err(at)?;
                env.operators.insert(name.clone(), table);
            }
        }
    }
    Ok(env)
}

fn lower_rel(env: &Environment, r: &RelAst) -> RelExpr {
    match r {
        RelAst::Named(n) => RelExpr::Named(env.relations[n].clone()),
        RelAst::Converse(i) => RelExpr::Converse(Box::new(lower_rel(env, i))),
        RelAst::Complement(i) => RelExpr::Complement(Box::new(lower_rel(env, i))),
    }
}

fn family(u: &Arc<Universe>, sets: &[SetLit]) -> Result<SubsetFamily, Error> {
    let masks = sets.iter().map(|s| u.mask_of(s)).collect::<Result<Vec<_>, _>>()?;
    SubsetFamily::from_masks(Arc::clone(u), &masks)
}

/// Lowers a checked expression; context-typed nodes take the declaration's universes.
fn lower(env: &Environment, e: &OpAst, dom: &Arc<Universe>, cod: &Arc<Universe>) -> Result<OperatorExpr, Error> {
    Ok(match e {
        OpAst::Transform(k, r) => OperatorExpr::FromRelation(*k, lower_rel(env, r)),
        OpAst::Compose(outer, inner) => {
            OperatorExpr::compose(lower(env, outer, dom, cod)?, lower(env, inner, dom, cod)?)
        }
        OpAst::Dual(i) => OperatorExpr::Dual(Box::new(lower(env, i, dom, cod)?)),
        OpAst::Identity => OperatorExpr::Identity(Arc::clone(dom)),
        OpAst::InteriorFrom(sets) => OperatorExpr::InteriorFromFamily(family(dom, sets)?),
        OpAst::ClosureFrom(sets) => OperatorExpr::ClosureFromFamily(family(dom, sets)?),
        OpAst::Table(entries) => {
            dom.ensure_table_sized()?;
            let mut out = vec![0u64; dom.powerset_len()];
            for (input, output) in entries {
                let i = dom.mask_of(input)?.value().expect("table-sized");
                let o = cod.mask_of(output)?;
                out[i as usize] = o.value().ok_or_else(|| Error::UniverseTooLarge {
                    name: cod.name().to_string(),
                    size: cod.len(),
                    cap: 64,
                })?;
            }
            OperatorExpr::TableLiteral(OperatorTable::new(Arc::clone(dom), Arc::clone(cod), out)?)
        }
        OpAst::Ref(n) => OperatorExpr::TableLiteral(env.operators[n].clone()),
    })
}
