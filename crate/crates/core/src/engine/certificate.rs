use petgraph::algo::toposort;
use petgraph::graphmap::DiGraphMap;

use super::{ChainError, ChainTrace, DecodingChoice, StepKind};
use crate::instance::{MessageIndex, PliableInstance, ReceiverSet};

/// Decoding graph left after pruning skipped messages from a run.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Nodes are non-skipped messages; an edge `x → y` means the receiver
    /// used to decode `x` already holds `y`.
    pub graph: DiGraphMap<MessageIndex, ()>,
    pub acyclic: bool,
}

impl Certificate {
    pub fn vertex_count(&self) -> usize {
        self.graph.node_count()
    }
}

/// Rebuilds the decoding graph of `trace` under `d` and checks it has no
/// directed cycle.
///
/// Every decode step uses the receiver equal to the chain so far and every
/// avoid step its `via` receiver; each contributes edges from the decoded
/// message to the receiver's non-skipped members.
pub fn acyclic_certificate(
    inst: &PliableInstance,
    trace: &ChainTrace,
    d: &DecodingChoice,
) -> Result<Certificate, ChainError> {
    let inconsistent = |msg: String| Err(ChainError::InconsistentTrace(msg));
    let mut graph = DiGraphMap::new();
    for x in inst.full().difference(trace.skipped).iter() {
        graph.add_node(x);
    }
    let mut chain = ReceiverSet::EMPTY;
    let mut hits = trace.hits.iter();
    for step in &trace.steps {
        if chain.contains(step.message) {
            return inconsistent(format!("message {} appears twice", step.message));
        }
        let receiver = match step.kind {
            StepKind::Decode => {
                if d.get(chain) != Some(step.message) || !inst.is_present(chain) {
                    return inconsistent(format!("D({chain}) is not {}", step.message));
                }
                Some(chain)
            }
            StepKind::Skip | StepKind::Avoid => {
                if inst.is_present(chain) || hits.next() != Some(&chain) {
                    return inconsistent(format!("step at {chain} is not preceded by an absent hit"));
                }
                if step.kind == StepKind::Skip {
                    if !trace.skipped.contains(step.message) {
                        return inconsistent(format!("skip of {} missing from skipped set", step.message));
                    }
                    None
                } else {
                    let b = step.via.ok_or_else(|| ChainError::InconsistentTrace("avoid step without via".into()))?;
                    if !(b.is_strict_subset(chain) && inst.is_present(b) && d.get(b) == Some(step.message)) {
                        return inconsistent(format!("via {b} does not decode {} inside {chain}", step.message));
                    }
                    Some(b)
                }
            }
        };
        if let Some(b) = receiver {
            for y in b.difference(trace.skipped).iter() {
                graph.add_edge(step.message, y, ());
            }
        }
        chain = chain.with(step.message);
    }
    if chain != inst.full() || hits.next().is_some() {
        return inconsistent("trace does not cover every message or has extra hits".into());
    }
    let acyclic = toposort(&graph, None).is_ok();
    Ok(Certificate { graph, acyclic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_chain, LookAhead, SkipSmallest};

    #[test]
    fn empty_family_gives_path_like_order() {
        let inst = PliableInstance::from_lists(4, &[]).unwrap();
        let d = DecodingChoice::smallest_missing(&inst);
        let trace = run_chain(&inst, &d, &mut SkipSmallest).unwrap();
        let cert = acyclic_certificate(&inst, &trace, &d).unwrap();
        assert!(cert.acyclic);
        assert_eq!(cert.vertex_count(), 4);
        // x_k's receiver holds x_1..x_{k-1}.
        assert_eq!(cert.graph.edge_count(), 6);
    }

    #[test]
    fn p1_lookahead_certificate_has_five_vertices() {
        let inst = PliableInstance::from_lists(6, &[&[3], &[1, 2, 3, 4], &[3, 4, 5, 6]]).unwrap();
        let d = DecodingChoice::new()
            .with(&inst, &[], 3)
            .with(&inst, &[3, 4], 5)
            .with(&inst, &[1, 3], 2)
            .with(&inst, &[1, 2, 3], 4)
            .complete_with_smallest(&inst);
        let trace = run_chain(&inst, &d, &mut LookAhead).unwrap();
        assert_eq!(trace.skip_count(), 1);
        let cert = acyclic_certificate(&inst, &trace, &d).unwrap();
        assert!(cert.acyclic);
        assert_eq!(cert.vertex_count(), 5);
        assert!(toposort(&cert.graph, None).is_ok());
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let inst = PliableInstance::from_lists(3, &[]).unwrap();
        let d = DecodingChoice::smallest_missing(&inst);
        let mut trace = run_chain(&inst, &d, &mut SkipSmallest).unwrap();
        trace.steps.swap(0, 1);
        assert!(matches!(
            acyclic_certificate(&inst, &trace, &d),
            Err(ChainError::InconsistentTrace(_))
        ));
    }
}
