//! Subcommand implementations.

use borderlab::boolpp::{self, WeightVector};
use borderlab::chow::{
    self, BoundedFunction, ChowMembership, ChowVector, NotVertexReason, VertexVerdict,
};
use borderlab::error::{Error, Result};
use borderlab::gadgets::{self, PartitionInstance};
use borderlab::interim::{self, Certificate, ExPostRule, FeasibilityVerdict};
use borderlab::io;
use borderlab::model::Environment;
use borderlab::optimize;
use borderlab::rational::{parse_rational, Rational};
use serde_json::{json, Value};

use crate::report::{Inputs, Results};
use crate::{ChowCommand, Command, FeasibleMethod, ReduceCommand, RevenueMethod};

pub fn run(command: Command, inputs: &mut Inputs) -> Result<Results> {
    let mut out = Results::default();
    match command {
        Command::Feasible { env, rule, method } => {
            let env = environment(inputs, &env.env)?;
            let rf = io::reduced_form_from_json(&inputs.document("rule", &rule)?)?;
            let verdict = match method {
                FeasibleMethod::Lp => interim::membership_lp(&env, &rf.y)?,
                FeasibleMethod::Border => interim::border_check(&env, &rf.y)?,
            };
            feasibility(&mut out, &env, &rf.y, verdict)?;
        }
        Command::Optrev { env, method } => {
            let env = environment(inputs, &env.env)?;
            match method {
                RevenueMethod::Lp => {
                    let opt = optimize::opt_rev_lp(&env)?;
                    out.rational("value", &opt.value)
                        .matrix("y", &opt.reduced_form.y)
                        .matrix("q", &opt.reduced_form.q);
                }
                RevenueMethod::Myerson => {
                    let opt = optimize::myerson_single_item(&env)?;
                    out.rational("value", &opt.value)
                        .matrix("y", &opt.allocation)
                        .matrix("virtual_values", &opt.virtual_values.phi);
                }
            }
        }
        Command::Optwel { env } => {
            let env = environment(inputs, &env.env)?;
            out.rational("value", &optimize::opt_wel(&env)?);
        }
        Command::Khintchine { weights, bounds } => {
            let a = WeightVector::new(list(inputs, "weights", &weights.weights)?);
            out.rational("K", &boolpp::khintchine(&a)?);
            if bounds {
                let b = boolpp::khintchine_bounds_check(&a)?;
                out.rational("K_squared", &b.k_squared)
                    .rational("norm_squared", &b.norm_squared)
                    .identity("lower_holds", b.lower_holds)
                    .identity("upper_holds", b.upper_holds)
                    .value("lower_tight", b.lower_tight)
                    .value("upper_tight", b.upper_tight);
            }
        }
        Command::PpRev { weights } => {
            let a = WeightVector::new(list(inputs, "weights", &weights.weights)?);
            out.rational("revenue", &boolpp::pp_opt_rev(&a)?);
        }
        Command::PpAudit { weights, offset } => {
            let stakes = list(inputs, "weights", &weights.weights)?;
            let a = match offset {
                Some(text) => WeightVector::affine(scalar(inputs, "offset", &text)?, stakes),
                None => WeightVector::new(stakes),
            };
            let audit = boolpp::mechanism_audit(&a)?;
            out.identity(
                "dominant_strategy_truthful",
                audit.dominant_strategy_truthful,
            )
            .identity("ex_post_ir", audit.ex_post_ir)
            .rational("expected_revenue", &audit.expected_revenue)
            .rational("khintchine_half", &audit.khintchine_half)
            .value("violations", audit.violations.clone());
        }
        Command::Chow(c) => run_chow(c, inputs, &mut out)?,
        Command::Reduce(r) => run_reduce(r, inputs, &mut out)?,
    }
    Ok(out)
}

fn run_chow(command: ChowCommand, inputs: &mut Inputs, out: &mut Results) -> Result<()> {
    match command {
        ChowCommand::Compute { function } => {
            let f = BoundedFunction::from_table(list(inputs, "function", &function)?)?;
            out.rationals("chow", &chow::chow_vector(&f).0)
                .value("boolean", f.is_boolean());
        }
        ChowCommand::Opt { weights, offset } => {
            let a = WeightVector::affine(
                scalar(inputs, "offset", &offset)?,
                list(inputs, "weights", &weights.weights)?,
            );
            let opt = chow::chow_opt(&a)?;
            out.rational("value", &opt.value)
                .rational("closed_form", &opt.closed_form)
                .rationals("optimizer", opt.optimizer.table());
        }
        ChowCommand::Member { vector } => {
            let c = ChowVector(list(inputs, "vector", &vector)?);
            membership(out, &c)?;
        }
        ChowCommand::Vertex { vector } => {
            let c = ChowVector(list(inputs, "vector", &vector)?);
            match chow::is_vertex(&c)? {
                VertexVerdict::Vertex { function, weights } => {
                    out.value("status", "vertex")
                        .rationals("function", function.table())
                        .rational("offset", &weights.offset_or_zero())
                        .rationals("weights", &weights.weights);
                }
                VertexVerdict::NotVertex(NotVertexReason::MultipleWitnesses) => {
                    out.value("status", "not_vertex")
                        .value("reason", "multiple_witnesses");
                }
                VertexVerdict::NotVertex(NotVertexReason::FractionalWitness(f)) => {
                    out.value("status", "not_vertex")
                        .value("reason", "fractional_witness")
                        .rationals("function", f.table());
                }
            }
        }
        ChowCommand::FromConditionals { p } => {
            let c = chow::conditionals_to_chow(&list(inputs, "p", &p)?)?;
            out.rationals("chow", &c.0);
            membership(out, &c)?;
        }
        ChowCommand::Majority { n } => {
            inputs.record("n", &n.to_string());
            let r = chow::majority_extremality(n)?;
            out.rational("chow_sum", &r.chow_sum)
                .rational("chow_opt_value", &r.chow_opt_value)
                .identity("identity", r.identity_holds);
            if let (Some(max), Some(extremal)) = (&r.exhaustive_max, r.extremal) {
                out.rational("exhaustive_max", max)
                    .identity("extremal", extremal);
            }
        }
    }
    Ok(())
}

fn run_reduce(command: ReduceCommand, inputs: &mut Inputs, out: &mut Results) -> Result<()> {
    match command {
        ReduceCommand::Partition { w } => {
            let w = list(inputs, "w", &w)?
                .iter()
                .map(|v| {
                    v.is_integer()
                        .then(|| v.to_integer().try_into().ok())
                        .flatten()
                        .ok_or_else(|| {
                            Error::InvalidInput(format!("{v} is not a positive 64-bit integer"))
                        })
                })
                .collect::<Result<Vec<u64>>>()?;
            let p = PartitionInstance::new(w)?;
            let (a0, a1) = gadgets::partition_gadget(&p);
            let count = gadgets::partition_count_via_khintchine(&p)?;
            out.rationals("a0", &a0.weights)
                .rationals("a1", &a1.weights)
                .rational("probability", &count.probability)
                .value("count", count.count.to_string())
                .value("brute_force", count.brute_force);
        }
        ReduceCommand::Stconn { graph, k } => {
            let g = io::graph_from_json(&inputs.document("graph", &graph.graph)?)?;
            inputs.record("s,t,k", &format!("{},{},{:?}", graph.s, graph.t, k));
            let r = gadgets::stconn_recover(&g, graph.s, graph.t, k)?;
            out.rational("expected_matching", &r.expected_matching)
                .rational("remainder", &r.remainder)
                .rational("p", &r.p)
                .rational("brute_force", &r.brute_force)
                .identity("check", r.check)
                .value("sandwich", r.sandwich_holds)
                .value("k", r.k)
                .value("m", r.m)
                .value("n", r.n);
        }
        ReduceCommand::Matroid { graph } => {
            let g = io::graph_from_json(&inputs.document("graph", &graph.graph)?)?;
            inputs.record("s,t", &format!("{},{}", graph.s, graph.t));
            let r = gadgets::matroid_gadget_check(&g, graph.s, graph.t)?;
            out.rational("C1", &r.c1)
                .rational("C2", &r.c2)
                .rational("p", &r.p)
                .identity("identity", r.identity_holds);
        }
    }
    Ok(())
}

fn environment(inputs: &mut Inputs, path: &str) -> Result<Environment> {
    io::environment_from_json(&inputs.document("env", path)?)
}

fn list(inputs: &mut Inputs, label: &str, arg: &str) -> Result<Vec<Rational>> {
    io::parse_rational_list(&inputs.inline(label, arg)?)
}

fn scalar(inputs: &mut Inputs, label: &str, arg: &str) -> Result<Rational> {
    inputs.record(label, arg);
    parse_rational(arg)
}

fn feasibility(
    out: &mut Results,
    env: &Environment,
    y: &[Vec<Rational>],
    verdict: FeasibilityVerdict,
) -> Result<()> {
    match verdict {
        FeasibilityVerdict::Feasible { witness } => {
            out.value("status", "feasible");
            if let Some(w) = witness {
                out.value("witness", expost_json(&w));
            }
        }
        FeasibilityVerdict::Infeasible(Certificate::Border(sets)) => {
            let (lhs, rhs) = interim::border_inequality_eval(env, y, &sets)?;
            let distinguished: Vec<Vec<usize>> = (0..env.players())
                .map(|i| {
                    (0..env.support(i).len())
                        .filter(|&k| sets.contains(i, k))
                        .collect()
                })
                .collect();
            out.value("status", "infeasible")
                .value(
                    "certificate",
                    json!({ "kind": "border", "distinguished": distinguished }),
                )
                .rational("lhs", &lhs)
                .rational("rhs", &rhs);
        }
        FeasibilityVerdict::Infeasible(Certificate::Farkas(cert)) => {
            out.value("status", "infeasible").value(
                "certificate",
                json!({
                    "kind": "farkas",
                    "constraint_multipliers": strings(&cert.constraint_multipliers),
                    "lower_multipliers": strings(&cert.lower_multipliers),
                    "upper_multipliers": strings(&cert.upper_multipliers),
                }),
            );
        }
    }
    Ok(())
}

fn membership(out: &mut Results, c: &ChowVector) -> Result<()> {
    match chow::chow_membership(c)? {
        ChowMembership::Feasible(f) => {
            out.value("status", "feasible")
                .rationals("witness", f.table());
        }
        ChowMembership::Infeasible(a) => {
            let best = chow::chow_opt(&a)?.value;
            out.value("status", "infeasible")
                .value(
                    "certificate",
                    json!({ "offset": a.offset_or_zero().to_string(), "weights": strings(&a.weights) }),
                )
                .rational("certificate_value", &c.dot(&a))
                .rational("polytope_max", &best);
        }
    }
    Ok(())
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn expost_json(rule: &ExPostRule) -> Value {
    json!({
        "sets": rule.sets.iter().map(|s| s.players().collect::<Vec<_>>()).collect::<Vec<_>>(),
        "weights": rule.weights.iter().map(|row| strings(row)).collect::<Vec<_>>(),
    })
}
