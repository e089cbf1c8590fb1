"""Exact conjugacy, primitive-conjugacy and commensurability growth for
free groups and free products of finite cyclic groups, together with the
padded-alphabet automata used to transport language complexity."""

__version__ = "0.1.0"
