"""Hot numeric kernels with backend selection.

The compiled Cython backend is used when its extension module is importable;
otherwise the pure numpy reference backend takes over. `SEPPACK_KERNELS`
(values: "compiled", "reference") forces the choice; forcing "compiled" when
the extension is missing raises at import time rather than silently falling
back.
"""

import os

from . import reference as _reference
from .spec import (  # noqa: F401
    KernelSpec,
    make_ball_spec,
    make_ellipsoid_spec,
    make_pball_spec,
    make_polytope_spec,
    make_smoothed_spec,
)

_forced = os.environ.get("SEPPACK_KERNELS", "").strip().lower()

if _forced == "reference":
    _impl = _reference
elif _forced == "compiled":
    from . import _core as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _reference

BACKEND = _impl.BACKEND
gauge_many = _impl.gauge_many
member_many = _impl.member_many
shell_member_many = _impl.shell_member_many
union_member_many = _impl.union_member_many
union_shell_member_many = _impl.union_shell_member_many


def get_backend(name=None):
    """Return a backend module by name (None = the selected one)."""
    if name in (None, BACKEND):
        return _impl
    if name == "reference":
        return _reference
    if name == "compiled":
        from . import _core

        return _core
    raise ValueError(f"unknown kernel backend {name!r}")
