"""A small logical-framework kernel for the lambda-Pi calculus modulo rewriting."""

from .errors import Diagnostic, DkmError, SourceSpan
from .terms import (KIND, TYPE, App, Const, Lam, Pi, Sort, Var, alpha_eq,
                    free_constants, occurs_bound, subst)
from .syntax import (ConstDecl, Definition, Rule, parse, parse_term, pretty,
                     print_decl, print_term)
from .rewrite import CompiledRuleSet, Reducer, compile_rules, conv, match_rule, nf, whnf
from .kernel import EMPTY_CONTEXT, Context, Theory, check, check_rule, elaborate, infer
from .catalog import coc_theory, golden_corpus, load_theory, stt_theory

__version__ = "0.1.0"
