"""lambdalex: semantic parsing with inverse lambda operators and a PCCG.

The package learns to translate natural-language sentences into
formal-language expressions (database queries, agent commands).  Unknown word
meanings are computed with inverse lambda-calculus application and
same-category generalization; a log-linear model over CCG derivations ranks
the alternatives.
"""

__version__ = "0.1.0"

from .errors import LambdaLexError
from .terms import (
    Abstraction,
    Application,
    Atom,
    Constant,
    Term,
    Variable,
    alpha_eq,
    apply,
    normalize,
    parse_term,
    print_term,
    replace,
    subterms,
)
from .typesys import Signature, infer_type, parse_type
from .inverse import InverseResult, inverse_l, inverse_r, verify_inverse

__all__ = [
    "LambdaLexError",
    "Term",
    "Variable",
    "Constant",
    "Abstraction",
    "Application",
    "Atom",
    "parse_term",
    "print_term",
    "alpha_eq",
    "apply",
    "normalize",
    "replace",
    "subterms",
    "Signature",
    "parse_type",
    "infer_type",
    "InverseResult",
    "inverse_r",
    "inverse_l",
    "verify_inverse",
]
