"""Line-oriented text format for workbench objects.

Grammar (one declaration per line; `#` starts a comment when it appears at
the beginning of a line or after whitespace; blank lines are skipped):

    space <name> basis <lbl> [<lbl> ...]
    vacuum <space> <lbl>
    y <space> <lbl> <lbl> -> <seriesvec>

    twist <name> <second-space> <first-space>   # R: second⊗first -> first⊗second
    r <lbl> <lbl> -> <seriesvec>

    smap <name> <space>
    s <lbl> <lbl> -> <seriesvec>

    coalg <name> <space>
    delta <lbl> -> <seriesvec>
    eps <lbl> -> <rational>

    action <name> <coalg> <module-space>
    a <lbl> <lbl> -> <seriesvec>

    coaction <name> <coalg> <comodule-space>
    rho <lbl> -> <seriesvec>

    module <name> <algebra-space> <module-space>
    m <lbl> <lbl> -> <seriesvec>

A <seriesvec> is a `;`-joined list of `(<lbl>[,<lbl>...]) : <series>` items;
omitted target tuples are zero.  Series literals follow the exact-series
syntax `c@(e1[,e2[,e3]])` joined by `+`; a bare rational is the constant
term.  Basis labels may themselves contain balanced parentheses (as the
pair labels of product algebras do); commas split target tuples only at the
top parenthesis level.
"""

from dataclasses import dataclass, field

from .linalg import SeriesMap, SeriesVector, Space, basis_tuples
from .nva import Nva, NvaModule
from .series import DEFAULT_RANGE, SeriesError, format_series, parse_series


class ParseError(ValueError):
    def __init__(self, line, col, expected):
        self.line = line
        self.col = col
        self.expected = expected
        super().__init__(f"line {line}, column {col}: expected {expected}")


@dataclass
class _Block:
    kind: str
    name: str
    header: tuple
    lines: list = field(default_factory=list)  # (key-tuple, seriesvec-text, lineno)


@dataclass
class WorkbenchFile:
    """Parsed declarations, resolvable into workbench domain objects."""

    spaces: dict = field(default_factory=dict)
    vacuums: dict = field(default_factory=dict)
    ys: dict = field(default_factory=dict)       # space name -> {(l1,l2): vec text}
    blocks: dict = field(default_factory=dict)   # (kind, name) -> _Block
    rng: tuple = DEFAULT_RANGE

    # -- resolution into domain objects --------------------------------------

    def space(self, name):
        if name not in self.spaces:
            raise ParseError(0, 0, f"declared space {name!r}")
        return self.spaces[name]

    def algebra(self, name):
        sp = self.space(name)
        if name not in self.vacuums:
            raise ParseError(0, 0, f"vacuum declaration for space {name!r}")
        cols = {
            key: _parse_vec(text, (sp,), ("x",), self.rng, lineno)
            for key, (text, lineno) in self.ys.get(name, {}).items()
        }
        for key in basis_tuples((sp, sp)):
            cols.setdefault(key, SeriesVector.zero((sp,)))
        return Nva(name, sp, self.vacuums[name],
                   SeriesMap((sp, sp), (sp,), cols))

    def algebras(self):
        return {name: self.algebra(name) for name in self.spaces
                if name in self.vacuums}

    def _block(self, kind, name):
        if (kind, name) not in self.blocks:
            raise ParseError(0, 0, f"{kind} block named {name!r}")
        return self.blocks[(kind, name)]

    def twist(self, name):
        from .twist import TwistOp

        b = self._block("twist", name)
        second, first = self.algebra(b.header[0]), self.algebra(b.header[1])
        dom = (second.space, first.space)
        cod = (first.space, second.space)
        cols = {key: _parse_vec(text, cod, ("x",), self.rng, lineno)
                for key, (text, lineno) in b.lines}
        for key in basis_tuples(dom):
            cols.setdefault(key, SeriesVector.zero(cod))
        return TwistOp(name, first, second, SeriesMap(dom, cod, cols))

    def smap(self, name):
        from .quantum import SMap

        b = self._block("smap", name)
        alg = self.algebra(b.header[0])
        sp2 = (alg.space, alg.space)
        cols = {key: _parse_vec(text, sp2, ("x",), self.rng, lineno)
                for key, (text, lineno) in b.lines}
        for key in basis_tuples(sp2):
            cols.setdefault(key, SeriesVector.zero(sp2))
        return SMap(name, alg, SeriesMap(sp2, sp2, cols))

    def coalg(self, name):
        from .smash import CoalgebraData

        b = self._block("coalg", name)
        alg = self.algebra(b.header[0])
        sp = alg.space
        dcols, ecols = {}, {}
        for key, (text, lineno) in b.lines:
            tag, lbl = key
            if tag == "delta":
                dcols[(lbl,)] = _parse_vec(text, (sp, sp), (), self.rng,
                                           lineno)
            else:
                ecols[(lbl,)] = _parse_vec(text, (), (), self.rng, lineno,
                                           scalar=True)
        for lbl in sp.basis:
            dcols.setdefault((lbl,), SeriesVector.zero((sp, sp)))
            ecols.setdefault((lbl,), SeriesVector.zero(()))
        return CoalgebraData(alg, SeriesMap((sp,), (sp, sp), dcols),
                             SeriesMap((sp,), (), ecols))

    def action(self, name):
        from .smash import ModuleAlgebraData

        b = self._block("action", name)
        coalg = self.coalg(b.header[0])
        module = self.algebra(b.header[1])
        hs, us = coalg.algebra.space, module.space
        cols = {key: _parse_vec(text, (us,), ("x",), self.rng, lineno)
                for key, (text, lineno) in b.lines}
        for key in basis_tuples((hs, us)):
            cols.setdefault(key, SeriesVector.zero((us,)))
        return ModuleAlgebraData(coalg, module,
                                 SeriesMap((hs, us), (us,), cols))

    def coaction(self, name):
        from .smash import ComoduleAlgebraData

        b = self._block("coaction", name)
        coalg = self.coalg(b.header[0])
        comodule = self.algebra(b.header[1])
        hs, vs = coalg.algebra.space, comodule.space
        cols = {(key[0],): _parse_vec(text, (hs, vs), (), self.rng, lineno)
                for key, (text, lineno) in b.lines}
        for lbl in vs.basis:
            cols.setdefault((lbl,), SeriesVector.zero((hs, vs)))
        return ComoduleAlgebraData(coalg, comodule,
                                   SeriesMap((vs,), (hs, vs), cols))

    def module(self, name):
        b = self._block("module", name)
        alg = self.algebra(b.header[0])
        msp = self.space(b.header[1])
        cols = {key: _parse_vec(text, (msp,), ("x",), self.rng, lineno)
                for key, (text, lineno) in b.lines}
        for key in basis_tuples((alg.space, msp)):
            cols.setdefault(key, SeriesVector.zero((msp,)))
        return NvaModule(name, alg, msp,
                         SeriesMap((alg.space, msp), (msp,), cols))


# ---------------------------------------------------------------------------
# tokenizing helpers


def _strip_comment(line):
    out = []
    for i, ch in enumerate(line):
        if ch == "#" and (i == 0 or line[i - 1].isspace()):
            break
        out.append(ch)
    return "".join(out)


def _split_top(text, sep):
    """Split on sep at parenthesis depth zero."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_target(item, lineno):
    """`(lbl[,lbl...]) : series` -> (labels tuple, series text)."""
    item = item.strip()
    if not item.startswith("("):
        raise ParseError(lineno, 1, "target tuple starting with '('")
    depth = 0
    for i, ch in enumerate(item):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                inner = item[1:i]
                rest = item[i + 1:].strip()
                if not rest.startswith(":"):
                    raise ParseError(lineno, i + 2, "':' after target tuple")
                labels = tuple(t.strip() for t in _split_top(inner, ","))
                return labels, rest[1:].strip()
    raise ParseError(lineno, len(item), "closing ')' in target tuple")


def _parse_vec(text, spaces, variables, rng, lineno, scalar=False):
    entries = {}
    text = text.strip()
    if text == "0" or not text:
        return SeriesVector(spaces, {})
    if scalar:
        try:
            return SeriesVector((), {(): parse_series(text, (), rng)})
        except SeriesError as exc:
            raise ParseError(lineno, 1, f"rational literal ({exc})")
    for item in _split_top(text, ";"):
        labels, lit = _parse_target(item, lineno)
        if len(labels) != len(spaces):
            raise ParseError(lineno, 1,
                             f"{len(spaces)} target label(s), got {labels}")
        for lbl, sp in zip(labels, spaces):
            if lbl not in sp.basis:
                raise ParseError(lineno, 1,
                                 f"basis label of {sp.name}, got {lbl!r}")
        try:
            entries[labels] = parse_series(lit, variables, rng)
        except SeriesError as exc:
            raise ParseError(lineno, 1, f"series literal ({exc})")
    return SeriesVector(spaces, entries)


# ---------------------------------------------------------------------------
# parsing


_BLOCK_HEADS = {"twist": 2, "smap": 1, "coalg": 1, "action": 2,
                "coaction": 2, "module": 2}
_BLOCK_LINES = {"r": ("twist", 2), "s": ("smap", 2), "delta": ("coalg", 1),
                "eps": ("coalg", 1), "a": ("action", 2),
                "rho": ("coaction", 1), "m": ("module", 2)}


def parse_file(text, rng=DEFAULT_RANGE):
    wf = WorkbenchFile(rng=rng)
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        toks = line.split(None)
        head = toks[0]

        if head == "space":
            if len(toks) < 4 or toks[2] != "basis":
                raise ParseError(lineno, 1,
                                 "'space <name> basis <lbl> [<lbl> ...]'")
            name, labels = toks[1], toks[3:]
            if name in wf.spaces:
                raise ParseError(lineno, 1, f"fresh space name ({name!r} reused)")
            if len(set(labels)) != len(labels):
                raise ParseError(lineno, 1, "distinct basis labels")
            wf.spaces[name] = Space(name, tuple(labels))
            current = None
        elif head == "vacuum":
            if len(toks) != 3:
                raise ParseError(lineno, 1, "'vacuum <space> <lbl>'")
            sp = wf.spaces.get(toks[1])
            if sp is None:
                raise ParseError(lineno, 1, f"declared space ({toks[1]!r})")
            if toks[2] not in sp.basis:
                raise ParseError(lineno, 1, f"basis label of {toks[1]}")
            wf.vacuums[toks[1]] = toks[2]
            current = None
        elif head == "y":
            body = _arrow_body(line, toks, 4, lineno,
                               "'y <space> <lbl> <lbl> -> <seriesvec>'")
            spname, l1, l2 = toks[1], toks[2], toks[3]
            sp = wf.spaces.get(spname)
            if sp is None:
                raise ParseError(lineno, 1, f"declared space ({spname!r})")
            for lbl in (l1, l2):
                if lbl not in sp.basis:
                    raise ParseError(lineno, 1,
                                     f"basis label of {spname}, got {lbl!r}")
            wf.ys.setdefault(spname, {})[(l1, l2)] = (body, lineno)
            current = None
        elif head in _BLOCK_HEADS:
            want = _BLOCK_HEADS[head]
            if len(toks) != 2 + want:
                raise ParseError(lineno, 1,
                                 f"'{head} <name>' plus {want} space/coalg name(s)")
            name, header = toks[1], tuple(toks[2:])
            key = (head, name)
            if key in wf.blocks:
                raise ParseError(lineno, 1, f"fresh {head} name ({name!r} reused)")
            current = _Block(head, name, header)
            wf.blocks[key] = current
        elif head in _BLOCK_LINES:
            kind, arity = _BLOCK_LINES[head]
            if current is None or current.kind != kind:
                raise ParseError(lineno, 1,
                                 f"'{head}' line inside a {kind} block")
            body = _arrow_body(line, toks, 1 + arity, lineno,
                               f"'{head} <lbl>... -> <seriesvec>'")
            labels = tuple(toks[1:1 + arity])
            key = (head, *labels) if kind == "coalg" else labels
            current.lines.append((key if kind == "coalg" else labels,
                                  (body, lineno)))
        else:
            raise ParseError(lineno, 1, f"declaration keyword, got {head!r}")
    return wf


def _arrow_body(line, toks, npre, lineno, expected):
    if len(toks) < npre + 2 or toks[npre] != "->":
        raise ParseError(lineno, 1, expected)
    return line.split("->", 1)[1].strip()


# ---------------------------------------------------------------------------
# canonical emission


def _emit_vec(vec):
    if vec.is_zero():
        return "0"
    return " ; ".join(
        f"({','.join(key)}):{format_series(s)}"
        for key, s in sorted(vec.entries.items())
    )


def emit_nva(nva, out=None):
    lines = [] if out is None else out
    lines.append(f"space {nva.name} basis {' '.join(nva.space.basis)}")
    lines.append(f"vacuum {nva.name} {nva.vacuum}")
    for (a, b) in sorted(nva.y.columns):
        lines.append(f"y {nva.name} {a} {b} -> {_emit_vec(nva.y.column((a, b)))}")
    return "\n".join(lines) + "\n" if out is None else None


def emit_twist(t, out=None, emit_algebras=True):
    lines = [] if out is None else out
    if emit_algebras:
        emit_nva(t.first, lines)
        if t.second.name != t.first.name:
            emit_nva(t.second, lines)
    lines.append(f"twist {t.name} {t.second.name} {t.first.name}")
    for key in sorted(t.table.columns):
        lines.append(f"r {key[0]} {key[1]} -> {_emit_vec(t.table.column(key))}")
    return "\n".join(lines) + "\n" if out is None else None


def emit_smap(s, out=None, emit_algebras=True):
    lines = [] if out is None else out
    if emit_algebras:
        emit_nva(s.algebra, lines)
    lines.append(f"smap {s.name} {s.algebra.name}")
    for key in sorted(s.table.columns):
        lines.append(f"s {key[0]} {key[1]} -> {_emit_vec(s.table.column(key))}")
    return "\n".join(lines) + "\n" if out is None else None


def emit_coalg(c, name, out=None, emit_algebras=True):
    lines = [] if out is None else out
    if emit_algebras:
        emit_nva(c.algebra, lines)
    lines.append(f"coalg {name} {c.algebra.name}")
    for lbl in c.algebra.space.basis:
        lines.append(f"delta {lbl} -> {_emit_vec(c.coproduct.column((lbl,)))}")
    for lbl in c.algebra.space.basis:
        lines.append(f"eps {lbl} -> {format_series(c.counit.column((lbl,)).get(()))}")
    return "\n".join(lines) + "\n" if out is None else None


def emit_action(a, name, coalg_name, out=None, emit_algebras=True):
    lines = [] if out is None else out
    if emit_algebras:
        emit_coalg(a.bialgebra, coalg_name, lines)
        if a.module.name != a.bialgebra.algebra.name:
            emit_nva(a.module, lines)
    lines.append(f"action {name} {coalg_name} {a.module.name}")
    for key in sorted(a.action.columns):
        lines.append(f"a {key[0]} {key[1]} -> {_emit_vec(a.action.column(key))}")
    return "\n".join(lines) + "\n" if out is None else None


def emit_coaction(c, name, coalg_name, out=None, emit_algebras=True):
    lines = [] if out is None else out
    if emit_algebras:
        emit_coalg(c.bialgebra, coalg_name, lines)
        if c.comodule.name != c.bialgebra.algebra.name:
            emit_nva(c.comodule, lines)
    lines.append(f"coaction {name} {coalg_name} {c.comodule.name}")
    for lbl in c.comodule.space.basis:
        lines.append(f"rho {lbl} -> {_emit_vec(c.coaction.column((lbl,)))}")
    return "\n".join(lines) + "\n" if out is None else None


def emit_workbench(wf, rng=DEFAULT_RANGE):
    """Canonical text for a parsed WorkbenchFile (sorted declarations)."""
    lines = []
    for name in wf.spaces:
        sp = wf.spaces[name]
        lines.append(f"space {name} basis {' '.join(sp.basis)}")
    for name, lbl in wf.vacuums.items():
        lines.append(f"vacuum {name} {lbl}")
    for spname in wf.ys:
        alg = wf.algebra(spname)
        for (a, b) in sorted(alg.y.columns):
            lines.append(
                f"y {spname} {a} {b} -> {_emit_vec(alg.y.column((a, b)))}")
    for (kind, name), b in wf.blocks.items():
        lines.append(f"{kind} {name} {' '.join(b.header)}")
        if kind == "twist":
            t = wf.twist(name)
            for key in sorted(t.table.columns):
                lines.append(
                    f"r {key[0]} {key[1]} -> {_emit_vec(t.table.column(key))}")
        elif kind == "smap":
            s = wf.smap(name)
            for key in sorted(s.table.columns):
                lines.append(
                    f"s {key[0]} {key[1]} -> {_emit_vec(s.table.column(key))}")
        elif kind == "coalg":
            c = wf.coalg(name)
            for lbl in c.algebra.space.basis:
                lines.append(
                    f"delta {lbl} -> {_emit_vec(c.coproduct.column((lbl,)))}")
            for lbl in c.algebra.space.basis:
                val = c.counit.column((lbl,)).get(())
                lines.append(f"eps {lbl} -> {format_series(val)}")
        elif kind == "action":
            a = wf.action(name)
            for key in sorted(a.action.columns):
                lines.append(
                    f"a {key[0]} {key[1]} -> {_emit_vec(a.action.column(key))}")
        elif kind == "coaction":
            c = wf.coaction(name)
            for lbl in c.comodule.space.basis:
                lines.append(
                    f"rho {lbl} -> {_emit_vec(c.coaction.column((lbl,)))}")
        elif kind == "module":
            m = wf.module(name)
            for key in sorted(m.yw.columns):
                lines.append(
                    f"m {key[0]} {key[1]} -> {_emit_vec(m.yw.column(key))}")
    return "\n".join(lines) + "\n"
