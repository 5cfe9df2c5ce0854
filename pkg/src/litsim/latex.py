"""Reduction of a LaTeX source tree to a single plain-text string.

The cascade: locate the unique main file (one uncommented begin-document
clause in the whole tree), inline input/include targets, strip the common
float/math environments, cut everything before the first section command
(or, failing that, before end-abstract), then remove the remaining markup.
Every failure mode maps to a typed discard reason so a corpus run can audit
how many documents each stage rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from litsim.errors import (
    AmbiguousMainFileError,
    ExtractionError,
    InclusionCycleError,
    NoFrontMatterMarkerError,
    NoMainFileError,
)

# Environments removed wholesale, the common containers of non-prose content.
DEFAULT_STRIP_ENVIRONMENTS = (
    "figure",
    "table",
    "align",
    "equation",
    "thebibliography",
    "deluxetable",
    "picture",
    "subequations",
)

MAX_INCLUDE_DEPTH = 16

_BEGIN_DOCUMENT_RE = re.compile(r"\\begin\s*\{document\}")
_INPUT_RE = re.compile(r"\\(?:input|include)\s*\{([^{}]*)\}")
_SECTION_RE = re.compile(r"\\section(?![a-zA-Z])")
_END_ABSTRACT_RE = re.compile(r"\\end\s*\{abstract\}")


@dataclass
class TexSource:
    """A source tree: relative path -> lossy-decoded UTF-8 text."""

    files: dict[str, str]
    main: str | None = None

    @classmethod
    def from_dir(cls, root: str | Path) -> "TexSource":
        root = Path(root)
        files = {}
        for path in sorted(p for p in root.rglob("*") if p.is_file()):
            rel = path.relative_to(root).as_posix()
            files[rel] = path.read_bytes().decode("utf-8", errors="replace")
        return cls(files=files)


@dataclass
class StripConfig:
    """Names of environments to remove (starred variants are implied)."""

    environments: tuple[str, ...] = DEFAULT_STRIP_ENVIRONMENTS


def strip_comments(tex: str) -> str:
    """Drop '%' to end-of-line, keeping escaped percents and all newlines."""
    out_lines = []
    for line in tex.split("\n"):
        i = 0
        cut = None
        while i < len(line):
            ch = line[i]
            if ch == "\\":
                i += 2  # backslash escapes the next character
            elif ch == "%":
                cut = i
                break
            else:
                i += 1
        out_lines.append(line if cut is None else line[:cut])
    return "\n".join(out_lines)


def find_main_tex(src: TexSource) -> str:
    """Locate the unique .tex file with an uncommented begin-document clause.

    Raises NoMainFileError when nothing qualifies and AmbiguousMainFileError
    when the tree holds more than one begin-document clause in total.
    """
    candidates = []
    total = 0
    for path in sorted(src.files):
        if not path.lower().endswith(".tex"):
            continue
        hits = len(_BEGIN_DOCUMENT_RE.findall(strip_comments(src.files[path])))
        if hits:
            candidates.append(path)
            total += hits
    if total == 0:
        raise NoMainFileError("no file contains a begin-document clause")
    if total > 1:
        raise AmbiguousMainFileError(
            f"begin-document found {total} times across {candidates}"
        )
    src.main = candidates[0]
    return src.main


def _resolve_include(src: TexSource, target: str) -> str | None:
    target = target.strip()
    for candidate in (target, target + ".tex"):
        normalized = str(Path(candidate).as_posix())
        if normalized.startswith("./"):
            normalized = normalized[2:]
        if normalized in src.files:
            return normalized
    return None


def flatten_source(src: TexSource, warnings: list[str] | None = None) -> str:
    """Recursively inline input/include targets starting from the main file.

    Comments are stripped from each file before scanning so commented-out
    inclusions stay dead.  Missing targets become empty text with a warning;
    exceeding the depth cap (an inclusion cycle) raises InclusionCycleError.
    """
    if src.main is None:
        raise ValueError("flatten_source requires src.main; run find_main_tex first")
    sink = warnings if warnings is not None else []

    def expand(path: str, depth: int) -> str:
        if depth > MAX_INCLUDE_DEPTH:
            raise InclusionCycleError(f"inclusion depth exceeded {MAX_INCLUDE_DEPTH} at {path!r}")
        text = strip_comments(src.files[path])

        def replace(match: re.Match) -> str:
            resolved = _resolve_include(src, match.group(1))
            if resolved is None:
                sink.append(f"input target not found: {match.group(1).strip()!r}")
                return ""
            return expand(resolved, depth + 1)

        return _INPUT_RE.sub(replace, text)

    return expand(src.main, 0)


def strip_environments(
    tex: str,
    cfg: StripConfig | None = None,
    warnings: list[str] | None = None,
) -> str:
    """Remove every matched begin/end block of the configured environments.

    Starred variants count as their own environment names.  Blocks are
    matched with a stack so nesting removes innermost-first; unmatched
    delimiters are left in place and reported as warnings.
    """
    cfg = cfg or StripConfig()
    sink = warnings if warnings is not None else []
    names = set()
    for env in cfg.environments:
        names.add(env)
        names.add(env + "*")
    alternation = "|".join(sorted(re.escape(n) for n in names))
    token_re = re.compile(r"\\(begin|end)\s*\{(" + alternation + r")\}")

    spans: list[tuple[int, int]] = []
    stack: list[tuple[str, int]] = []  # (env name, begin start offset)
    for match in token_re.finditer(tex):
        kind, env = match.group(1), match.group(2)
        if kind == "begin":
            stack.append((env, match.start()))
            continue
        if any(open_env == env for open_env, _ in stack):
            while stack:
                open_env, start = stack.pop()
                if open_env == env:
                    spans.append((start, match.end()))
                    break
                sink.append(f"begin{{{open_env}}} implicitly closed by end{{{env}}}")
        else:
            sink.append(f"unmatched end{{{env}}} left in place")
    for open_env, _ in stack:
        sink.append(f"unmatched begin{{{open_env}}} left in place")

    if not spans:
        return tex
    # Merge overlapping/nested spans, then cut.
    spans.sort()
    merged = [spans[0]]
    for start, end in spans[1:]:
        last_start, last_end = merged[-1]
        if start <= last_end:
            merged[-1] = (last_start, max(last_end, end))
        else:
            merged.append((start, end))
    pieces = []
    cursor = 0
    for start, end in merged:
        pieces.append(tex[cursor:start])
        cursor = end
    pieces.append(tex[cursor:])
    return "".join(pieces)


def trim_front_matter(tex: str) -> str:
    """Cut everything before the first section command.

    Without any section command, cut through the end-abstract marker instead;
    with neither marker the document is discarded.
    """
    match = _SECTION_RE.search(tex)
    if match:
        return tex[match.start():]
    match = _END_ABSTRACT_RE.search(tex)
    if match:
        return tex[match.end():]
    raise NoFrontMatterMarkerError("no section command and no end-abstract marker")


# --- markup removal ---------------------------------------------------------

_MATH_RES = (
    re.compile(r"(?<!\\)\$\$.*?(?<!\\)\$\$", re.DOTALL),
    re.compile(r"(?<!\\)\$.*?(?<!\\)\$", re.DOTALL),
    re.compile(r"\\\[.*?\\\]", re.DOTALL),
    re.compile(r"\\\(.*?\\\)", re.DOTALL),
)

_BEGIN_END_RE = re.compile(r"\\(?:begin|end)\s*\{[^{}]*\}")

# Commands whose argument is a reference, not prose: dropped with the command.
_DROP_ARG_RE = re.compile(
    r"\\(?:cite[a-zA-Z]*|ref|eqref|autoref|pageref|cref|Cref|label|url|href"
    r"|nocite|bibliography|bibliographystyle|includegraphics)\*?"
    r"(?:\[[^\]]*\])*(?:\{[^{}]*\})+"
)

# Commands whose mandatory argument is running text: keep the argument.
_KEEP_ARG_RE = re.compile(
    r"\\(?:section|subsection|subsubsection|paragraph|subparagraph|chapter"
    r"|emph|textbf|textit|textrm|footnote)\*?"
    r"(?:\[[^\]]*\])?\{([^{}]*)\}"
)

_CONTROL_RE = re.compile(r"\\[a-zA-Z]+\*?|\\.|\\", re.DOTALL)


def detex_to_text(tex: str) -> str:
    """Best-effort reduction of markup to plain prose.

    Math is removed, text-carrying commands keep their argument,
    reference-like commands lose theirs, every other control sequence is
    dropped, braces vanish and whitespace collapses.  The output never
    contains backslash, brace, or dollar characters.
    """
    text = tex
    for pattern in _MATH_RES:
        text = pattern.sub(" ", text)
    text = _BEGIN_END_RE.sub(" ", text)
    # Fixpoint loop so nested arguments resolve innermost-first.
    for _ in range(10):
        replaced = _DROP_ARG_RE.sub(" ", text)
        replaced = _KEEP_ARG_RE.sub(r"\1 ", replaced)
        if replaced == text:
            break
        text = replaced
    text = _CONTROL_RE.sub(" ", text)
    text = text.replace("~", " ")
    text = re.sub(r"[{}$]", " ", text)
    return re.sub(r"\s+", " ", text).strip()


@dataclass
class ExtractionOutcome:
    """Per-document result of the cascade: text or a typed discard reason."""

    id: str
    text: str | None = None
    discard_reason: str | None = None
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        record: dict = {"id": self.id}
        if self.discard_reason is None:
            record["text"] = self.text
        else:
            record["discard_reason"] = self.discard_reason
        record["warnings"] = self.warnings
        return record


def extract_text(src: TexSource, cfg: StripConfig | None = None,
                 warnings: list[str] | None = None) -> str:
    """Run the full cascade, raising a typed ExtractionError on discard."""
    find_main_tex(src)
    flat = flatten_source(src, warnings=warnings)
    flat = strip_environments(flat, cfg, warnings=warnings)
    flat = trim_front_matter(flat)
    return detex_to_text(flat)


def extract_outcome(doc_id: str, src: TexSource,
                    cfg: StripConfig | None = None) -> ExtractionOutcome:
    """Cascade wrapper that never raises: failures become discard reasons."""
    warnings: list[str] = []
    try:
        text = extract_text(src, cfg, warnings=warnings)
    except ExtractionError as exc:
        return ExtractionOutcome(id=doc_id, discard_reason=exc.reason, warnings=warnings)
    return ExtractionOutcome(id=doc_id, text=text, warnings=warnings)


def find_document_dirs(root: str | Path) -> list[tuple[str, Path]]:
    """Locate document source trees under a corpus directory.

    A document root is the shallowest directory that directly contains a
    .tex file; its id is the root-relative posix path.
    """
    root = Path(root)
    found: list[tuple[str, Path]] = []

    def walk(directory: Path) -> None:
        entries = sorted(directory.iterdir())
        has_tex = any(e.is_file() and e.suffix.lower() == ".tex" for e in entries)
        if has_tex and directory != root:
            found.append((directory.relative_to(root).as_posix(), directory))
            return
        for entry in entries:
            if entry.is_dir():
                walk(entry)

    walk(root)
    if not found and any(p.suffix.lower() == ".tex" for p in root.iterdir() if p.is_file()):
        found.append((root.name, root))
    return found
