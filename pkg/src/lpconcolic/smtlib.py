"""SMT-LIB2 export of Herbrand constraints.

Script layout, one item per line:

1. ``; targets: X Y`` comment naming the target variables.
2. ``(declare-datatypes ((Herbrand 0)) ((ctor ...)))`` with one constructor per
   symbol of the extended signature, in canonical order. Constructors are
   written as quoted symbols ``|f|``; the selector for argument ``i`` of
   ``f`` is ``|f.i|``.
3. ``(declare-const X Herbrand)`` per target variable.
4. ``(assert ...)`` per literal, with an ``exists``/``forall`` binder when the
   literal quantifies variables; ``(assert true)`` for the empty conjunction.
5. ``(check-sat)`` and ``(get-model)``.

Atoms are not terms of the datatype: ``p(s) = p(t)`` is encoded as the
conjunction of argument equalities, and as ``false`` when the predicates
differ. The depth bound used by the built-in solver is not encoded.
"""

from __future__ import annotations

from collections.abc import Iterable

from .constraints import HerbrandConstraint, PosLit
from .solver import Signature, SolverConfig, extend_signature, order_targets
from .terms import Atom, Program, Term, Var, variables

SORT = "Herbrand"


def var_symbol(v: Var) -> str:
    if v.index == 0:
        return v.name
    if v.index < 0:
        return f"_!a{-v.index}"
    return f"{v.name}!{v.index}"


def ctor_symbol(name: str) -> str:
    return f"|{name}|"


def term_sexpr(t: Term) -> str:
    if isinstance(t, Var):
        return var_symbol(t)
    if not t.args:
        return ctor_symbol(t.functor)
    return f"({ctor_symbol(t.functor)} {' '.join(term_sexpr(a) for a in t.args)})"


def atom_equality(a: Atom, b: Atom) -> str:
    if a.root != b.root:
        return "false"
    eqs = [f"(= {term_sexpr(s)} {term_sexpr(t)})" for s, t in zip(a.args, b.args)]
    if not eqs:
        return "true"
    return eqs[0] if len(eqs) == 1 else f"(and {' '.join(eqs)})"


def literal_sexpr(lit) -> str:
    body = atom_equality(lit.lhs, lit.rhs)
    if not isinstance(lit, PosLit):
        body = f"(not {body})"
    qs = [v for v in variables(lit.lhs, lit.rhs) if v in lit.quantified]
    if not qs:
        return body
    binder = "exists" if isinstance(lit, PosLit) else "forall"
    decls = " ".join(f"({var_symbol(v)} {SORT})" for v in qs)
    return f"({binder} ({decls}) {body})"


def datatype_decl(sig: Signature) -> str:
    ctors = []
    for name, arity in sig:
        if arity == 0:
            ctors.append(f"({ctor_symbol(name)})")
        else:
            fields = " ".join(f"(|{name}.{i}| {SORT})" for i in range(arity))
            ctors.append(f"({ctor_symbol(name)} {fields})")
    return f"(declare-datatypes (({SORT} 0)) (({' '.join(ctors)})))"


def export_smtlib(c: HerbrandConstraint, targets: Iterable[Var], p: Program | Signature,
                  cfg: SolverConfig = SolverConfig()) -> str:
    targets = order_targets(targets)
    lines = [f"; targets: {' '.join(var_symbol(v) for v in targets)}".rstrip()]
    lines.append(datatype_decl(extend_signature(p, cfg.fresh_constants)))
    lines += [f"(declare-const {var_symbol(v)} {SORT})" for v in targets]
    if c.is_true:
        lines.append("(assert true)")
    lines += [f"(assert {literal_sexpr(lit)})" for lit in c.conjuncts]
    lines += ["(check-sat)", "(get-model)"]
    return "\n".join(lines) + "\n"
