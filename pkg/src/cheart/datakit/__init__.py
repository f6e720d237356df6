from .conditions import ConditionSamplerSpec, age_group_index, encode_conditions
from .io import (
    FORMAT_VERSION,
    decode_labels,
    load_dataset,
    load_sequence,
    one_hot,
    save_dataset,
    save_sequence,
)
from .phantom import ConditionSensitivity, PhantomParams, contraction_curve, make_dataset, make_phantom
from .types import (
    BACKGROUND,
    GENDERS,
    LABEL_NAMES,
    LV,
    MYO,
    N_CLASSES,
    RV,
    SPLITS,
    AnatomySequence,
    ConditionProfile,
    ConditionVector,
    Dataset,
    NormalizationBounds,
    SegVolume,
    SubjectRecord,
)

__all__ = [
    "AnatomySequence",
    "BACKGROUND",
    "ConditionProfile",
    "ConditionSamplerSpec",
    "ConditionSensitivity",
    "ConditionVector",
    "Dataset",
    "FORMAT_VERSION",
    "GENDERS",
    "LABEL_NAMES",
    "LV",
    "MYO",
    "N_CLASSES",
    "NormalizationBounds",
    "PhantomParams",
    "RV",
    "SPLITS",
    "SegVolume",
    "SubjectRecord",
    "age_group_index",
    "contraction_curve",
    "decode_labels",
    "encode_conditions",
    "load_dataset",
    "load_sequence",
    "make_dataset",
    "make_phantom",
    "one_hot",
    "save_dataset",
    "save_sequence",
]
