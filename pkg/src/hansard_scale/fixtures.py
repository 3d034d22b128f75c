"""Deterministic corpora for tests, the demo pipeline and recovery experiments.

Speech texts are synthetic. Only metadata shapes follow the published
tables: speaker names, parties, government membership and speech lengths
of the December 2007 budget debate, and the contribution and word totals
of the 2002-2004 cabinet. Everything regenerates byte-identically from the
seeds in ``FIXTURE_SEEDS``.
"""

from __future__ import annotations

import datetime as dt
import html
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .corpus_store import Contribution, Member, write_members_tsv
from .dtm import CountMatrix, count_words, default_stopwords
from .errors import DegenerateSpec
from .linkage import RoleHolding, write_roles

FIXTURE_SEEDS = {
    "synthetic": 42,
    "debate": 2007,
    "transcripts": 1919,
    "budget_speeches": 1923,
    "cabinet": 2004,
    "store": 12,
}

# -- Wordfish generator ---------------------------------------------------


@dataclass
class SyntheticSpec:
    """Parameters of a corpus drawn from the Wordfish model.

    Any of the parameter arrays may be given explicitly; missing ones are
    drawn from ``seed``. Supplied positions are standardised to mean 0 and
    population sd 1. The anchor document (row 0) has ``alpha = 0``.
    """

    n_docs: int = 20
    n_terms: int = 100
    true_omega: Optional[Sequence[float]] = None
    beta: Optional[Sequence[float]] = None
    psi: Optional[Sequence[float]] = None
    alpha: Optional[Sequence[float]] = None
    beta_sd: float = 1.0
    psi_mean: float = 1.0
    psi_sd: float = 0.5
    alpha_sd: float = 0.3
    seed: int = FIXTURE_SEEDS["synthetic"]


@dataclass
class SyntheticTruth:
    alpha: np.ndarray
    psi: np.ndarray
    beta: np.ndarray
    omega: np.ndarray
    seed: int

    def to_json(self) -> str:
        return json.dumps({k: (v.tolist() if isinstance(v, np.ndarray) else v)
                           for k, v in self.__dict__.items()}, indent=1) + "\n"


def standardize(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    sd = x.std()
    if sd == 0:
        raise DegenerateSpec("positions have zero spread")
    return (x - x.mean()) / sd


def generate_wordfish_corpus(spec: SyntheticSpec) -> tuple[CountMatrix, SyntheticTruth]:
    """Draw counts cellwise from Poisson(exp(alpha_i + psi_j + beta_j omega_i))."""
    n, k = spec.n_docs, spec.n_terms
    rng = np.random.default_rng(spec.seed)
    omega = standardize(spec.true_omega if spec.true_omega is not None else np.linspace(-1.0, 1.0, n))
    beta = np.asarray(spec.beta, float) if spec.beta is not None else rng.normal(0.0, spec.beta_sd, k)
    psi = np.asarray(spec.psi, float) if spec.psi is not None else rng.normal(spec.psi_mean, spec.psi_sd, k)
    if spec.alpha is not None:
        alpha = np.asarray(spec.alpha, float)
    else:
        alpha = rng.normal(0.0, spec.alpha_sd, n)
        alpha[0] = 0.0
    if omega.shape != (n,) or beta.shape != (k,) or psi.shape != (k,) or alpha.shape != (n,):
        raise DegenerateSpec("parameter arrays do not match n_docs x n_terms")
    if not np.any(beta):
        raise DegenerateSpec("all word weights are zero; positions are not identified")
    lam = np.exp(alpha[:, None] + psi[None, :] + np.outer(omega, beta))
    counts = rng.poisson(lam)
    docs = [f"doc{i:03d}" for i in range(n)]
    terms = [f"term{j:04d}" for j in range(k)]
    return CountMatrix(docs, terms, counts), SyntheticTruth(alpha, psi, beta, omega, spec.seed)


def write_synthetic(root: str | Path, spec: SyntheticSpec | None = None) -> tuple[Path, Path]:
    """Write ``inputs/synthetic.tsv`` and ``truth/synthetic.json`` under ``root``.

    Truth lives in its own directory; the CLI refuses estimation inputs
    from any ``truth`` directory.
    """
    spec = spec or SyntheticSpec()
    m, truth = generate_wordfish_corpus(spec)
    root = Path(root)
    (root / "inputs").mkdir(parents=True, exist_ok=True)
    (root / "truth").mkdir(parents=True, exist_ok=True)
    mpath, tpath = root / "inputs" / "synthetic.tsv", root / "truth" / "synthetic.json"
    m.write(mpath)
    tpath.write_text(truth.to_json(), encoding="utf-8")
    return mpath, tpath


# -- text helpers ---------------------------------------------------------

_FILLER = ["the", "and", "of", "to", "in", "that", "is", "we", "this", "for", "it", "on", "are", "a", "be"]


def _sentences(tokens: Sequence[str], rng: np.random.Generator) -> str:
    """Join tokens into capitalised sentences; punctuation does not change the word count."""
    out, i = [], 0
    while i < len(tokens):
        size = int(rng.integers(8, 20))
        chunk = list(tokens[i:i + size])
        i += size
        chunk[0] = chunk[0][:1].upper() + chunk[0][1:]
        if len(chunk) > 6:
            chunk[len(chunk) // 2] += ","
        out.append(" ".join(chunk) + ".")
    return " ".join(out)


def _paragraphs(text: str, words_per_para: int = 150) -> list[str]:
    words = text.split(" ")
    return [" ".join(words[i:i + words_per_para]) for i in range(0, len(words), words_per_para)]


# -- members --------------------------------------------------------------

D = dt.date


def _mid(name: str) -> str:
    from .linkage import fold_accents

    parts = fold_accents(name).replace("'", "").replace(".", "").lower().split()
    if len(parts) > 2 and parts[-2] in ("o", "mac", "de", "ni", "nic"):
        parts = parts[:-2] + [parts[-2] + parts[-1]]
    return "-".join([parts[-1]] + parts[:-1])


_REGISTER_ROWS = [
    # name, party, constituency, from, to
    ("Cathal Brugha", "SF", "Waterford County", D(1919, 1, 21), D(1922, 7, 7)),
    ("George Noble Plunkett", "SF", "Roscommon North", D(1919, 1, 21), D(1927, 6, 23)),
    ("Seán T. O'Kelly", "SF", "Dublin College Green", D(1919, 1, 21), D(1945, 6, 25)),
    ("Bertie Ahern", "FF", "Dublin Central", D(1977, 6, 16), D(2011, 2, 25)),
    ("Dermot Ahern", "FF", "Louth", D(1987, 2, 17), D(2011, 2, 25)),
    ("Michael Ahern", "FF", "Cork East", D(1982, 2, 18), D(2011, 2, 25)),
    ("Seán Ardagh", "FF", "Dublin South Central", D(1997, 6, 6), D(2011, 2, 25)),
    ("Pat Carey", "FF", "Dublin North West", D(1997, 6, 6), D(2011, 2, 25)),
    ("Brian Cowen", "FF", "Laois-Offaly", D(1984, 6, 14), D(2011, 2, 25)),
    ("Noel Dempsey", "FF", "Meath West", D(1987, 2, 17), D(2011, 2, 25)),
    ("Jimmy Devins", "FF", "Sligo-North Leitrim", D(2002, 5, 17), D(2011, 2, 25)),
    ("Batt O'Keeffe", "FF", "Cork North West", D(1987, 2, 17), D(2011, 2, 25)),
    ("John Gormley", "GP", "Dublin South East", D(1997, 6, 6), D(2011, 2, 25)),
    ("Richard Bruton", "FG", "Dublin North Central", D(1982, 11, 24), None),
    ("Ulick Burke", "FG", "Galway East", D(1997, 6, 6), D(2011, 2, 25)),
    ("Phil Hogan", "FG", "Carlow-Kilkenny", D(1989, 6, 15), D(2014, 7, 15)),
    ("Enda Kenny", "FG", "Mayo", D(1975, 11, 12), D(2020, 2, 8)),
    ("Dan Neville", "FG", "Limerick West", D(1997, 6, 6), D(2016, 2, 26)),
    ("Kieran O'Donnell", "FG", "Limerick East", D(2007, 6, 14), D(2016, 2, 26)),
    ("James Reilly", "FG", "Dublin North", D(2007, 6, 14), D(2016, 2, 26)),
    ("Leo Varadkar", "FG", "Dublin West", D(2007, 6, 14), None),
    ("Eamon Gilmore", "LAB", "Dún Laoghaire", D(1989, 6, 15), D(2016, 2, 26)),
    ("Róisín Shortall", "LAB", "Dublin North West", D(1992, 11, 25), None),
    ("Arthur Morgan", "SF", "Louth", D(2002, 5, 17), D(2011, 2, 25)),
    ("Caoimhghín Ó Caoláin", "SF", "Cavan-Monaghan", D(1997, 6, 6), None),
    ("Mary Harney", "PD", "Dublin Mid-West", D(1981, 6, 11), D(2011, 2, 25)),
    ("Michael Smith", "FF", "Tipperary North", D(1969, 6, 18), D(2007, 5, 24)),
    ("Joe Walsh", "FF", "Cork South West", D(1977, 6, 16), D(2007, 5, 24)),
    ("Charlie McCreevy", "FF", "Kildare North", D(1977, 6, 16), D(2004, 11, 22)),
    ("John O'Donoghue", "FF", "Kerry South", D(1987, 2, 17), D(2011, 2, 25)),
    ("Micheál Martin", "FF", "Cork South Central", D(1989, 6, 15), None),
    ("Séamus Brennan", "FF", "Dublin South", D(1981, 6, 11), D(2008, 7, 9)),
    ("Michael McDowell", "PD", "Dublin South East", D(2002, 5, 17), D(2007, 5, 24)),
    ("Martin Cullen", "FF", "Waterford", D(1987, 2, 17), D(2011, 2, 25)),
    ("Éamon Ó Cuív", "FF", "Galway West", D(1992, 11, 25), None),
    ("Mary Coughlan", "FF", "Donegal South West", D(1987, 2, 17), D(2011, 2, 25)),
    ("Brian Lenihan", "FF", "Dublin West", D(1996, 4, 2), D(2011, 2, 25)),
]


def register() -> list[Member]:
    """Members register covering every fixture speaker."""
    return [Member(_mid(n), n, p, c, a, b) for n, p, c, a, b in _REGISTER_ROWS]


def member_id(name: str) -> str:
    return _mid(name)


def role_holdings() -> list[RoleHolding]:
    return [
        RoleHolding("Taoiseach", _mid("Bertie Ahern"), D(1997, 6, 26), D(2008, 5, 7)),
        RoleHolding("Taoiseach", _mid("Brian Cowen"), D(2008, 5, 7), D(2011, 3, 9)),
        RoleHolding("Ceann Comhairle", _mid("Cathal Brugha"), D(1919, 1, 21), D(1919, 1, 22)),
    ]


# -- the December 2007 budget debate -------------------------------------


@dataclass(frozen=True)
class DebateSpeaker:
    name: str  # as in the register
    party: str
    government: bool
    words: int
    label: str  # speaker label printed in the transcript
    lean: float  # share of partisan vocabulary drawn from the government side
    sitting: dt.date
    note: str = ""


# name, party, government, words, label, lean, sitting day in December 2007
_DEBATE_ROWS = [
    ("Bertie Ahern", "FF", True, 3959, "An Taoiseach", 0.90, 6, "Taoiseach"),
    ("Dermot Ahern", "FF", True, 2700, "Minister for Foreign Affairs (Deputy Dermot Ahern)", 0.82, 6, ""),
    ("Michael Ahern", "FF", True, 1190, "Deputy Michael Ahern", 0.80, 11, ""),
    ("Seán Ardagh", "FF", True, 1015, "Deputy Seán Ardagh", 0.67, 11, ""),
    ("Pat Carey", "FF", True, 942,
     "Minister of State at the Department of Community, Rural and Gaeltacht Affairs (Deputy Pat Carey)", 0.66, 11, ""),
    ("Brian Cowen", "FF", True, 8733, "Minister for Finance (Deputy Brian Cowen)", 0.85, 5, "Minister for Finance"),
    ("Noel Dempsey", "FF", True, 1438, "Minister for Transport (Deputy Noel Dempsey)", 0.79, 6, ""),
    ("Jimmy Devins", "FF", True, 1090, "Deputy Jimmy Devins", 0.76, 11, ""),
    ("Batt O'Keeffe", "FF", True, 715,
     "Minister of State at the Department of the Environment, Heritage and Local Government (Deputy Batt O'Keeffe)",
     0.94, 11, ""),
    ("John Gormley", "GP", True, 4306,
     "Minister for the Environment, Heritage and Local Government (Deputy John Gormley)", 0.78, 6, ""),
    ("Richard Bruton", "FG", False, 10817, "Deputy Richard Bruton", 0.20, 5, ""),
    ("Ulick Burke", "FG", False, 714, "Deputy Ulick Burke", 0.22, 11, ""),
    ("Phil Hogan", "FG", False, 1438, "Deputy Phil Hogan", 0.18, 11, ""),
    ("Enda Kenny", "FG", False, 3924, "Deputy Enda Kenny", 0.10, 6, "FG party leader"),
    ("Dan Neville", "FG", False, 1210, "Deputy Dan Neville", 0.06, 11, ""),
    ("Kieran O'Donnell", "FG", False, 1182, "Deputy Kieran O'Donnell", 0.24, 11, ""),
    ("James Reilly", "FG", False, 1683, "Deputy James Reilly", 0.19, 11, ""),
    ("Leo Varadkar", "FG", False, 1876, "Deputy Leo Varadkar", 0.21, 11, ""),
    ("Eamon Gilmore", "LAB", False, 5141, "Deputy Eamon Gilmore", 0.17, 6, ""),
    ("Róisín Shortall", "LAB", False, 2662, "Deputy Róisín Shortall", 0.34, 11, ""),
    ("Arthur Morgan", "SF", False, 6158, "Deputy Arthur Morgan", 0.16, 6, ""),
    ("Caoimhghín Ó Caoláin", "SF", False, 1438, "Deputy Caoimhghín Ó Caoláin", 0.23, 11, ""),
]

GOVERNMENT_WORDS = (
    "progress investment delivered growth prudent achievement stability commitment infrastructure "
    "prosperity responsible sustained confidence partnership strengthen secured enterprise "
    "competitiveness balanced steady opportunity record improvement modernisation"
).split()
OPPOSITION_WORDS = (
    "failure waste crisis neglect broken incompetence squandered mismanagement chaos scandal "
    "betrayed bungled overspending queues debacle arrogance complacency decline burden unfair "
    "inequality shambles trolleys excuses"
).split()
SHARED_WORDS = (
    "budget minister tax spending house deputy government people country economy services health "
    "education housing income public money billion finance sector families workers pensions "
    "rates children hospitals taxpayers measures plan year"
).split()


def debate_fixture(seed: int = FIXTURE_SEEDS["debate"]) -> list[tuple[DebateSpeaker, str]]:
    """Twenty-two speeches with the published speakers, parties and lengths.

    Each speech mixes filler (stop words), shared budget vocabulary and a
    partisan vocabulary; ``lean`` is the share of partisan tokens taken
    from the government list. Word counts match exactly.
    """
    rng = np.random.default_rng(seed)
    out = []
    for name, party, gov, words, label, lean, day, note in _DEBATE_ROWS:
        speaker = DebateSpeaker(name, party, gov, words, label, lean, D(2007, 12, day), note)
        kinds = rng.choice(3, size=words, p=[0.35, 0.30, 0.35])
        partisan_gov = rng.random(words) < lean
        tokens = []
        for kind, g in zip(kinds, partisan_gov):
            if kind == 0:
                tokens.append(_FILLER[rng.integers(len(_FILLER))])
            elif kind == 1:
                tokens.append(SHARED_WORDS[rng.integers(len(SHARED_WORDS))])
            else:
                vocab = GOVERNMENT_WORDS if g else OPPOSITION_WORDS
                tokens.append(vocab[rng.integers(len(vocab))])
        text = _sentences(tokens, rng)
        assert count_words(text) == words
        out.append((speaker, text))
    return out


# -- transcripts ----------------------------------------------------------

_HTML_HEAD = """<!DOCTYPE html>
<html><head>
<meta charset="utf-8">
<title>{title}</title>
{meta}</head>
<body>
"""


def _page(title: str, day: Optional[dt.date], body: list[str]) -> str:
    meta = f'<meta name="date" content="{day.isoformat()}">\n' if day else ""
    return _HTML_HEAD.format(title=html.escape(title), meta=meta) + "\n".join(body) + "\n</body></html>\n"


def _turn(label: str, text: str, rng: np.random.Generator, interject: bool = True) -> list[str]:
    paras = _paragraphs(text)
    lines = [f"<p>{html.escape(label)}: {html.escape(paras[0])}</p>"]
    for k, para in enumerate(paras[1:], start=1):
        if interject and k % 4 == 0:
            lines.append("<p><i>Interruptions.</i></p>")
        lines.append(f"<p>{html.escape(para)}</p>")
    return lines


def _prose_date(day: dt.date) -> str:
    return f"{day.strftime('%A')}, {day.day} {day.strftime('%B')} {day.year}"


BUDGET_DEBATE_TITLE = "Financial Resolution No. 1: General"


def transcript_files(seed: int = FIXTURE_SEEDS["transcripts"]) -> dict[str, str]:
    """Canonical-markup sittings: relative path -> HTML text."""
    rng = np.random.default_rng(seed)
    files: dict[str, str] = {}

    files["1919/dail-1919-01-21.html"] = _page(
        f"Dáil Éireann debate - {_prose_date(D(1919, 1, 21))}", None, [
            "<h2>Declaration of Independence</h2>",
            "<p>Cathal Brugha: We are gathered here to declare the independence of this country.</p>",
            "<p><i>Deputies rose in their places.</i></p>",
            "<p>Count Plunkett: I second the motion and ask the assembly to adopt the declaration.</p>",
            "<p>Mr. Seán T. O'Kelly: The message to the free nations of the world will now be read.</p>",
            "<p>It is addressed to every nation and asks that our claim be heard.</p>",
            '<p class="procedural">The Dáil adjourned at 5.20 p.m.</p>',
        ])

    speeches = debate_fixture()
    by_day: dict[dt.date, list[tuple[DebateSpeaker, str]]] = {}
    for speaker, text in speeches:
        by_day.setdefault(speaker.sitting, []).append((speaker, text))
    for day, items in sorted(by_day.items()):
        body = []
        if day == D(2007, 12, 6):
            body += [
                "<h2>Order of Business</h2>",
                "<p>An Taoiseach: It is proposed to take the business in the order set out on the paper.</p>",
                "<p>Deputy Enda Kenny: The House should have an opportunity to debate the hospital waiting lists.</p>",
                "<p><i>Question put and agreed to.</i></p>",
            ]
        title = BUDGET_DEBATE_TITLE if day == D(2007, 12, 5) else BUDGET_DEBATE_TITLE + " (Resumed)"
        body.append(f"<h2>{html.escape(title)}</h2>")
        for speaker, text in items:
            body += _turn(speaker.label, text, rng)
        body.append('<p class="procedural">Debate adjourned.</p>')
        files[f"2007/dail-{day.isoformat()}.html"] = _page(
            f"Dáil Éireann debate - {_prose_date(day)}", day, body)

    day = D(2008, 10, 14)
    files[f"2008/dail-{day.isoformat()}.html"] = _page(
        f"Dáil Éireann debate - {_prose_date(day)}", day, [
            f"<h2>{html.escape(BUDGET_DEBATE_TITLE)}</h2>",
            "<p>Minister for Finance (Deputy Brian Lenihan): The public finances have deteriorated "
            "sharply and the budget must restore stability.</p>",
            "<p>Deputy Richard Bruton: The Minister has arrived too late to a crisis of his own making.</p>",
        ])
    return files


def write_transcripts(root: str | Path) -> list[Path]:
    root = Path(root)
    written = []
    for rel, text in transcript_files().items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
        written.append(path)
    return written


# -- small store fixture --------------------------------------------------

_STORE_ROWS = [
    ("Cathal Brugha", "Cathal Brugha", "Declaration of Independence", D(1919, 1, 21)),
    ("Count Plunkett", "George Noble Plunkett", "Declaration of Independence", D(1919, 1, 21)),
    ("Seán T. O'Kelly", "Seán T. O'Kelly", "Declaration of Independence", D(1919, 1, 21)),
    ("Seán T. O'Kelly", "Seán T. O'Kelly", "Democratic Programme", D(1919, 4, 1)),
    ("Charlie McCreevy", "Charlie McCreevy", "Financial Resolution No. 1: General", D(2002, 12, 4)),
    ("Noel Dempsey", "Noel Dempsey", "Education Estimates", D(2003, 3, 12)),
    ("Mary Harney", "Mary Harney", "Enterprise Estimates", D(2003, 5, 7)),
    ("Michael McDowell", "Michael McDowell", "Criminal Justice Bill", D(2003, 10, 22)),
    ("Mary Coughlan", "Mary Coughlan", "Social Welfare Bill", D(2003, 12, 10)),
    ("Micheál Martin", "Micheál Martin", "Health Estimates", D(2004, 2, 18)),
    ("Bertie Ahern", "Bertie Ahern", "Leaders' Questions", D(2004, 6, 30)),
    ("Enda Kenny", "Enda Kenny", "Leaders' Questions", D(2004, 6, 30)),
]

MISSPELLED_SPEAKER = ("Mary Harney", "Hurley Mayor")  # (intended member, as printed)


def store_fixture(misspell: bool = False, seed: int = FIXTURE_SEEDS["store"]) -> list[Contribution]:
    """Twelve contributions, three of them on 21 January 1919.

    With ``misspell`` one speaker name is printed so badly that linkage
    must leave it unmatched.
    """
    rng = np.random.default_rng(seed)
    out = []
    for k, (printed, canonical, title, day) in enumerate(_STORE_ROWS, start=1):
        if misspell and canonical == MISSPELLED_SPEAKER[0]:
            printed = MISSPELLED_SPEAKER[1]
        n = int(rng.integers(3, 12))
        text = _sentences([SHARED_WORDS[i] for i in rng.integers(len(SHARED_WORDS), size=n)], rng)
        out.append(Contribution.from_text(printed, title, day, text, contribution_id=k))
    return out


def store_fixture_links() -> dict[int, str]:
    """Hand linkage of :func:`store_fixture`: contribution id -> member id."""
    return {k: member_id(row[1]) for k, row in enumerate(_STORE_ROWS, start=1)}


# -- finance ministers' budget speeches (word clouds) ---------------------

_FINANCE_MINISTERS = [
    ("Ernest Blythe", [1926, 1927, 1930]),
    ("Seán MacEntee", [1933, 1936, 1950]),
    ("Seán Lemass", [1941]),
    ("Jack Lynch", [1966, 1970]),
    ("Richie Ryan", [1974, 1976]),
    ("Ray MacSharry", [1988]),
    ("Bertie Ahern", [1992, 1993]),
    ("Charlie McCreevy", [1998, 2001, 2003]),
    ("Brian Cowen", [2005, 2006, 2007]),
    ("Brian Lenihan", [2008]),
]

_FINANCE_VOCAB = (
    "tax revenue expenditure duty relief income rates customs excise deficit borrowing debt "
    "pensions welfare capital investment agriculture industry employment prices inflation wages "
    "savings exports trade growth services estimates surplus allowance levy"
).split()


def budget_speeches(seed: int = FIXTURE_SEEDS["budget_speeches"]) -> list[tuple[str, int, str]]:
    """(minister, year, text) for a handful of synthetic budget speeches.

    Word choice follows a Zipf law over a finance vocabulary in which "tax"
    has the largest weight; "government" is boosted from the 1960s to the
    1980s and again from 2005.
    """
    rng = np.random.default_rng(seed)
    out = []
    weights = 1.0 / np.arange(1, len(_FINANCE_VOCAB) + 1) ** 0.9
    for minister, years in _FINANCE_MINISTERS:
        for year in years:
            vocab = list(_FINANCE_VOCAB) + ["government"]
            gov_weight = 0.35 if 1960 <= year <= 1989 or year >= 2005 else 0.05
            w = np.append(weights, gov_weight)
            n = int(rng.integers(1500, 4000))
            content = rng.choice(len(vocab), size=n, p=w / w.sum())
            filler = rng.random(n) < 0.4
            tokens = [_FILLER[rng.integers(len(_FILLER))] if f else vocab[c] for c, f in zip(content, filler)]
            out.append((minister, year, _sentences(tokens, rng)))
    return out


# -- the 2002-2004 cabinet ------------------------------------------------


@dataclass(frozen=True)
class CabinetMinister:
    name: str
    party: str
    department: str
    spending_share: float
    high_spending: bool
    contributions: int
    total_words: int
    true_position: float = 0.0


# name, party, department, budget share 2004 (synthetic), contributions, words (published totals)
_CABINET_ROWS = [
    ("Noel Dempsey", "FF", "Education and Science", 0.170, 8066, 1273835),
    ("Michael McDowell", "PD", "Justice, Equality and Law Reform", 0.012, 6290, 1038527),
    ("Bertie Ahern", "FF", "Taoiseach", 0.002, 6505, 790964),
    ("Dermot Ahern", "FF", "Communications, Marine and Natural Resources", 0.008, 3047, 755471),
    ("Charlie McCreevy", "FF", "Finance", 0.006, 3249, 657010),
    ("Brian Cowen", "FF", "Foreign Affairs", 0.008, 2444, 652062),
    ("Martin Cullen", "FF", "Environment and Local Government", 0.100, 5826, 574464),
    ("Séamus Brennan", "FF", "Transport", 0.060, 3324, 513938),
    ("Mary Coughlan", "FF", "Social and Family Affairs", 0.250, 2627, 503413),
    ("Mary Harney", "PD", "Enterprise, Trade and Employment", 0.050, 3357, 418745),
    ("Michael Smith", "FF", "Defence", 0.030, 2464, 330575),
    ("Éamon Ó Cuív", "FF", "Community, Rural and Gaeltacht Affairs", 0.004, 1459, 286194),
    ("John O'Donoghue", "FF", "Arts, Sport and Tourism", 0.020, 1553, 282154),
    ("Micheál Martin", "FF", "Health and Children", 0.280, 789, 141721),
]

HIGH_SPENDING = (
    "Micheál Martin", "Noel Dempsey", "Mary Coughlan", "Martin Cullen",
    "Séamus Brennan", "Mary Harney", "Michael Smith", "John O'Donoghue",
)
# Direction of the others' positions before scaling (right = less spending).
_OTHERS_PATTERN = {
    "Michael McDowell": 1.2, "Bertie Ahern": 0.3, "Dermot Ahern": 0.2,
    "Charlie McCreevy": 1.0, "Brian Cowen": 0.4, "Éamon Ó Cuív": -1.5,
}
TARGET_R_HIGH = -0.95
TARGET_R_ALL = -0.53


def _corr(a, b) -> float:
    return float(np.corrcoef(a, b)[0, 1])


def _cabinet_positions() -> dict[str, float]:
    """True positions with corr(position, share) of exactly -0.95 on the eight
    high-spending departments and -0.53 over all fourteen."""
    shares = {r[0]: r[3] for r in _CABINET_ROWS}
    s8 = np.array([shares[n] for n in HIGH_SPENDING])
    zs = standardize(s8)
    e = np.array([0.4, -1.0, 0.9, -0.3, 1.1, -0.6, 0.2, -0.7])
    e = e - e.mean()
    e = e - (e @ zs) / (zs @ zs) * zs
    pos8 = TARGET_R_HIGH * zs + math.sqrt(1 - TARGET_R_HIGH**2) * standardize(e)
    others = list(_OTHERS_PATTERN)
    pattern = np.array([_OTHERS_PATTERN[n] for n in others])
    s_all = np.array([shares[n] for n in HIGH_SPENDING + tuple(others)])

    def gap(c: float) -> float:
        return _corr(np.concatenate([pos8, c * pattern]), s_all) - TARGET_R_ALL

    lo, hi = 0.0, 10.0  # correlation weakens monotonically as the others spread out
    if gap(lo) * gap(hi) > 0:
        raise DegenerateSpec("cannot reach the target all-cabinet correlation")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap(lo) * gap(mid) <= 0:
            hi = mid
        else:
            lo = mid
    pos = standardize(np.concatenate([pos8, 0.5 * (lo + hi) * pattern]))
    return dict(zip(HIGH_SPENDING + tuple(others), map(float, pos)))


def cabinet() -> list[CabinetMinister]:
    positions = _cabinet_positions()
    return [
        CabinetMinister(n, p, d, s, n in HIGH_SPENDING, c, w, positions[n])
        for n, p, d, s, c, w in _CABINET_ROWS
    ]


def pseudo_vocabulary(n: int, seed: int = 0) -> list[str]:
    """``n`` distinct pronounceable non-words that survive tokenising."""
    rng = np.random.default_rng(seed)
    cons, vows = "bdfgklmnprstvz", "aeiou"
    stop = default_stopwords()
    words: dict[str, None] = {}
    while len(words) < n:
        syll = int(rng.integers(2, 4))
        w = "".join(cons[rng.integers(len(cons))] + vows[rng.integers(len(vows))] for _ in range(syll))
        if w not in stop:
            words.setdefault(w)
    return sorted(words)


def cabinet_documents(n_terms: int = 300, words_per_doc: int = 6000,
                      seed: int = FIXTURE_SEEDS["cabinet"]) -> list[tuple[str, str]]:
    """One merged document per minister, drawn from the Wordfish model.

    Labels are member ids. Word weights are standard normal; counts are
    scaled to roughly ``words_per_doc`` content words per minister, and
    stop words are mixed in (they are removed again by preprocessing).
    """
    rng = np.random.default_rng(seed)
    ministers = cabinet()
    omega = np.array([m.true_position for m in ministers])
    vocab = pseudo_vocabulary(n_terms, seed)
    beta = rng.normal(0.0, 1.0, n_terms)
    psi = rng.normal(0.0, 0.7, n_terms)
    base = np.exp(psi[None, :] + np.outer(omega, beta))
    alpha = np.log(words_per_doc / base.sum(axis=1)) + rng.normal(0.0, 0.2, len(ministers))
    counts = rng.poisson(np.exp(alpha[:, None]) * base)
    docs = []
    for m, row in zip(ministers, counts):
        tokens = np.repeat(np.array(vocab, dtype=object), row)
        rng.shuffle(tokens)
        filler = [_FILLER[i] for i in rng.integers(len(_FILLER), size=len(tokens) // 3)]
        mixed = list(tokens) + filler
        order = rng.permutation(len(mixed))
        docs.append((member_id(m.name), _sentences([mixed[i] for i in order], rng)))
    return docs


def spending_series() -> dict[str, float]:
    return {member_id(m.name): m.spending_share for m in cabinet()}


def cabinet_contributions(names: Sequence[str] | None = None, filler: str = "word") -> list[Contribution]:
    """Contributions reproducing the published per-minister counts and word totals.

    Texts are repetitions of ``filler``; words are spread as evenly as
    possible over each minister's contributions. Rows are linked already.
    """
    rows = [r for r in _CABINET_ROWS if names is None or r[0] in names]
    out = []
    start = D(2002, 6, 6)
    for name, _party, dept, _share, n, total in rows:
        base, extra = divmod(total, n)
        for k in range(n):
            words = base + (1 if k < extra else 0)
            text = " ".join([filler] * words)
            day = start + dt.timedelta(days=k % 840)
            out.append(Contribution(name, f"{dept} questions", day, text, words, member_id=member_id(name)))
    return out


# -- writing --------------------------------------------------------------


def write_fixtures(root: str | Path) -> dict[str, str]:
    """Write every fixture in its exchange format plus ``seeds.json``.

    Returns relative path -> description.
    """
    from .corpus_store import CorpusStore, export_tsv

    root = Path(root)
    inputs = root / "inputs"
    inputs.mkdir(parents=True, exist_ok=True)
    made = {}
    write_transcripts(inputs / "transcripts")
    made["inputs/transcripts"] = "canonical-markup sittings (1919, December 2007, October 2008)"
    write_members_tsv(register(), inputs / "members.tsv")
    made["inputs/members.tsv"] = "members register"
    write_roles(role_holdings(), inputs / "roles.tsv")
    made["inputs/roles.tsv"] = "dated office holders"
    with CorpusStore() as store:
        store.insert_many(store_fixture())
        export_tsv(store, inputs / "store_fixture.tsv")
    made["inputs/store_fixture.tsv"] = "twelve-row contributions fixture"
    from .analysis import write_series

    write_series(spending_series(), inputs / "spending_2004.tsv")
    made["inputs/spending_2004.tsv"] = "department spending share by minister"
    _write_docs(cabinet_documents(), inputs / "cabinet_documents.tsv")
    made["inputs/cabinet_documents.tsv"] = "one merged document per cabinet minister"
    _write_docs([(m, t) for m, _y, t in budget_speeches()], inputs / "budget_speeches.tsv")
    made["inputs/budget_speeches.tsv"] = "finance ministers' budget speeches"
    mpath, tpath = write_synthetic(root)
    made[mpath.relative_to(root).as_posix()] = "Wordfish synthetic corpus (20 x 100)"
    made[tpath.relative_to(root).as_posix()] = "generating parameters (never an estimation input)"
    (root / "seeds.json").write_text(json.dumps(FIXTURE_SEEDS, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    made["seeds.json"] = "seeds"
    return made


def _write_docs(docs: Sequence[tuple[str, str]], path: Path) -> None:
    from .corpus_store import escape_field

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("label\ttext\n")
        for label, text in docs:
            fh.write(f"{escape_field(label)}\t{escape_field(text)}\n")
