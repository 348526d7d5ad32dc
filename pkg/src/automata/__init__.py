"""Weighted automata, transducers, their operator algebra and composite pipelines."""

from .automaton import (
    HASH,
    Alphabet,
    WeightedAutomaton,
    WeightedTransducer,
    as_word,
    check_word,
    complete_family,
    wa_evaluate,
    wt_evaluate,
)
from .operators import (
    constant_automaton,
    partition_constant,
    wa_product,
    wa_project,
    wa_scale,
    wa_sum,
    wa_times_wt,
    wt_inverse,
)
from .pipeline import (
    AutomatonLeaf,
    InverseNode,
    MultiplicativeNode,
    ProductNode,
    ProjectionNode,
    ScaleNode,
    SumNode,
    TransducerLeaf,
    leaf,
    materialize,
    pipeline_evaluate,
    pipeline_evaluate_pair,
    pipeline_forward,
    pipeline_partition,
    pipeline_partition_by,
)
from .serialization import (
    automaton_from_dict,
    automaton_to_dict,
    transducer_from_dict,
    transducer_to_dict,
)

__all__ = [
    'HASH',
    'Alphabet',
    'WeightedAutomaton',
    'WeightedTransducer',
    'as_word',
    'check_word',
    'complete_family',
    'wa_evaluate',
    'wt_evaluate',
    'constant_automaton',
    'partition_constant',
    'wa_product',
    'wa_project',
    'wa_scale',
    'wa_sum',
    'wa_times_wt',
    'wt_inverse',
    'AutomatonLeaf',
    'InverseNode',
    'MultiplicativeNode',
    'ProductNode',
    'ProjectionNode',
    'ScaleNode',
    'SumNode',
    'TransducerLeaf',
    'leaf',
    'materialize',
    'pipeline_evaluate',
    'pipeline_evaluate_pair',
    'pipeline_forward',
    'pipeline_partition',
    'pipeline_partition_by',
    'automaton_from_dict',
    'automaton_to_dict',
    'transducer_from_dict',
    'transducer_to_dict',
]
