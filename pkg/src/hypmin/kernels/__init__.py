"""Hot numerical kernels: polygon developing and the closing system.

Two interchangeable backends: a Cython extension (``_fast``) and a pure
Python reference (``reference``).  The compiled one is picked at import
when available; set ``HYPMIN_PURE=1`` to force the reference backend.
Both expose:

``develop_chain(thetas, lengths) -> (chain, defect)``
    chain of n+1 points (start plus each vertex image, ending with the
    image of the start) and the raw 2x2 holonomy defect.

``closing_system(thetas, lengths, i0, i1, i2) -> (res, jac)``
    sign-canonicalized closing residual (entries (1,2), (2,1) and
    (1,1)-(2,2) of the defect) and its exact Jacobian with respect to
    the logs of the three solved edge lengths (row-major 3x3).
"""

import os

if os.environ.get("HYPMIN_PURE"):
    from . import reference as _impl

    backend = "python"
else:
    try:
        from . import _fast as _impl

        backend = "compiled"
    except ImportError:
        from . import reference as _impl

        backend = "python"

develop_chain = _impl.develop_chain
closing_system = _impl.closing_system


def get_backend(name: str):
    """Return a specific backend module ('compiled' or 'python')."""
    if name == "python":
        from . import reference

        return reference
    if name == "compiled":
        from . import _fast

        return _fast
    raise ValueError(f"unknown backend {name!r}")
