"""Hierarchical content names.

A name is a tuple of non-empty string components, written as a
'/'-separated path ("/net/ap03/p0/s42"). Tuples keep names hashable and
cheap to slice, which the forwarding tables rely on.
"""

from __future__ import annotations

Name = tuple  # tuple[str, ...]


def name(path: str) -> Name:
    """Parse a '/'-separated path into a name tuple."""
    parts = tuple(p for p in path.split("/") if p != "")
    if not parts:
        raise ValueError(f"empty name: {path!r}")
    for p in parts:
        if not isinstance(p, str):
            raise ValueError(f"name component must be str: {p!r}")
    return parts


def name_str(n: Name) -> str:
    """Render a name tuple back to its path form."""
    return "/" + "/".join(n)


def is_prefix(prefix: Name, n: Name) -> bool:
    """True iff prefix matches a leading run of n's components (or all of them)."""
    return len(prefix) <= len(n) and n[: len(prefix)] == prefix


def rewrite_name(n: Name, old_prefix: Name, new_prefix: Name) -> Name:
    """Replace old_prefix at the head of n with new_prefix.

    Raises ValueError when old_prefix does not actually prefix n. The
    remainder after the prefix is preserved untouched.
    """
    if not is_prefix(old_prefix, n):
        raise ValueError(f"{name_str(old_prefix)} is not a prefix of {name_str(n)}")
    return tuple(new_prefix) + n[len(old_prefix) :]
