"""Higher-order link prediction on temporal simplicial data.

Typical use::

    from simplicial_closure import load_dataset, evaluate, EvalConfig

    ds = load_dataset("data/contact-primary-school", "contact-primary-school")
    report = evaluate(ds, EvalConfig(k=3, train_fraction=0.8))
    print(report["SDWG"].performance)
"""
from .cliques import (CandidateLimitError, CandidateSet, CliquePartition, candidates,
                      enumerate_k_cliques, partition_cliques)
from .complex import ComplexView, EmptyWindowError, build_view
from .evaluation import (EvalConfig, EvalReport, MethodResult, average_precision, evaluate,
                         generate_synthetic, label_candidates, pr_auc, reports_to_csv,
                         reports_to_json, sweep)
from .ingest import (MAX_ORDER, DatasetError, Interaction, SimplicialDataset, StatsRecord,
                     dataset_stats, load_dataset, write_dataset)
from .scoring import (METHODS, EdgeWeightCache, Scorer, ScoreTable, combine, crw_weight,
                      score_candidates, score_kaa, score_kcn, score_kpa, score_kra,
                      sdw_weight, sw_weight)

__version__ = "0.1.0"
