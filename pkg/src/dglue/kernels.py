"""Backend selection for batch expression evaluation.

The compiled extension is used when it imports; set ``DGLUE_PURE_PYTHON=1``
to force the numpy fallback.
"""

import os

if os.environ.get("DGLUE_PURE_PYTHON"):
    from ._kernels_py import BACKEND, eval_program
else:
    try:
        from ._kernels import BACKEND, eval_program
    except ImportError:
        from ._kernels_py import BACKEND, eval_program

__all__ = ["BACKEND", "eval_program"]
