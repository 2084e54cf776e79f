"""Sub-package with the finite transformation groups and their actions on samples."""

from .group_kinds import (
    DEFAULT_ENUMERATION_CAP,
    ClusterSignChange,
    FullPermutation,
    GroupElement,
    GroupKind,
    PairSwap,
    PermutationGroup,
    SignChange,
    SignGroup,
    StratifiedPermutation,
    apply,
    element_count,
    enumerate_group,
    sample_uniform,
)
from .groups_cfg import (
    GROUP_CFGS,
    ClusterSignChangeCfg,
    FullPermutationCfg,
    GroupCfg,
    PairSwapCfg,
    SignChangeCfg,
    StratifiedPermutationCfg,
)
