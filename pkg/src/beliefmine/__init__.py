"""Belief and persuasion mining for social-media response corpora."""

from .augment import (
    AugmentedVariant,
    EmbeddingTable,
    filter_variants,
    generate_variants,
    load_embeddings,
    nearest_neighbors,
)
from .classifier import (
    BeliefModel,
    EvalReport,
    TfidfVocabulary,
    evaluate,
    fit_and_train,
    fit_vocabulary,
    load_model,
    predict,
    save_model,
    train,
    vectorize,
)
from .community import (
    CommunityProfile,
    HashtagGraph,
    Partition,
    build_graph,
    layout,
    louvain,
    modularity,
    profile,
)
from .config import RunConfig, config_hash, default_source_handles
from .corpus import (
    MAYBE,
    NO,
    YES,
    BeliefRow,
    LinkedPair,
    TweetRecord,
    belief_ratio,
    labeled_pairs,
    link_pairs,
    load_corpus,
    resolve_label,
    source_belief_table,
)
from .sentiment import ValenceLexicon, compound, load_lexicon
from .structure import (
    MedianPair,
    classify_by_median,
    evaluate_structure_classifier,
    levenshtein,
    median_string,
    shallow_parse,
    split_by_majority_response,
)
from .textprep import TokenSeq, lemmatize, ngrams, normalize

__version__ = "0.1.0"
