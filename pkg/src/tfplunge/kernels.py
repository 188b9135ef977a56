"""Hot kernels, compiled when available.

``BACKEND`` is ``"cython"`` when the extension imported and ``"numpy"``
otherwise.  Setting ``TFPLUNGE_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _fallback

if os.environ.get("TFPLUNGE_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

if _compiled is not None:
    assemble_multiplier = _compiled.assemble_multiplier
    BACKEND = "cython"
else:
    assemble_multiplier = _fallback.assemble_multiplier
    BACKEND = "numpy"

__all__ = ["assemble_multiplier", "BACKEND"]
