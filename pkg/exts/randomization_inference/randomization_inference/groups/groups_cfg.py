"""Configuration classes selecting a transformation group."""

from __future__ import annotations

from dataclasses import dataclass

from ..sample import Sample
from . import group_kinds


@dataclass(kw_only=True)
class GroupCfg:
    """Base configuration of a transformation group."""

    class_type: type[group_kinds.GroupKind] = group_kinds.GroupKind
    """The group class. It is built from the sample with its ``from_sample`` constructor."""

    def build(self, sample: Sample) -> group_kinds.GroupKind:
        """Construct the group acting on ``sample``."""
        return self.class_type.from_sample(sample)  # type: ignore[attr-defined]

    def to_dict(self) -> dict:
        return {"class_type": self.class_type.__name__}


@dataclass(kw_only=True)
class SignChangeCfg(GroupCfg):
    """Configuration for independent sign changes of every observation."""

    class_type: type[group_kinds.GroupKind] = group_kinds.SignChange


@dataclass(kw_only=True)
class FullPermutationCfg(GroupCfg):
    """Configuration for all permutations of the acted-on coordinate."""

    class_type: type[group_kinds.GroupKind] = group_kinds.FullPermutation


@dataclass(kw_only=True)
class StratifiedPermutationCfg(GroupCfg):
    """Configuration for permutations within strata. The sample must carry stratum labels."""

    class_type: type[group_kinds.GroupKind] = group_kinds.StratifiedPermutation


@dataclass(kw_only=True)
class PairSwapCfg(GroupCfg):
    """Configuration for swaps within pairs. The sample must carry pair labels."""

    class_type: type[group_kinds.GroupKind] = group_kinds.PairSwap


@dataclass(kw_only=True)
class ClusterSignChangeCfg(GroupCfg):
    """Configuration for one sign per cluster.

    Without cluster labels on the sample every index (e.g. every per-cluster score) is its own cluster.
    """

    class_type: type[group_kinds.GroupKind] = group_kinds.ClusterSignChange


GROUP_CFGS: dict[str, type[GroupCfg]] = {
    "sign_change": SignChangeCfg,
    "full_permutation": FullPermutationCfg,
    "stratified_permutation": StratifiedPermutationCfg,
    "pair_swap": PairSwapCfg,
    "cluster_sign_change": ClusterSignChangeCfg,
}
"""Group identifiers used by the command-line front end."""
