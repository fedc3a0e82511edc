"""nvaw: exact workbench for finite-dimensional nonlocal vertex algebras."""

from .series import Q, Series, Window, LinExpr, window_equal, Eq, EqResult
