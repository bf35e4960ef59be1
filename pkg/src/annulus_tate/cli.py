"""Command-line interface: rank tables, periodicity verification, corpus runs.

Reports are JSON (schema 1) with deterministic field order, or aligned
text tables.  Grading keys serialize as comma-joined strings ("i,j,k").
When a cache directory is configured (the ANNULUS_TATE_CACHE environment
variable overrides --cache-dir), a repeated invocation with an identical
config returns the cached report byte for byte.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import os
import time
from pathlib import Path

import click

from . import decat
from .cube import format_bits, parse_bits, resolve
from .khovanov import Theory, total_rank
from .links import BraidError, BraidWord, close_braid, parse_braid_word
from .tate import (
    PeriodicRun,
    Verdict,
    check_equivariance,
    verify_cascade,
    verify_collapse,
    verify_diagonals,
    verify_e2_correspondence,
    verify_khtate_limit,
    verify_rank_inequality,
)

SCHEMA_VERSION = 1
CACHE_ENV = "ANNULUS_TATE_CACHE"

MAX_CORPUS_LENGTH = 8
MAX_CORPUS_STRANDS = 5
MAX_RESOLVE_LISTING = 12  # crossings; 2^c resolutions are printed without --alpha


def _jsonify(obj):
    """Normalize to JSON-native types so reports round-trip exactly."""
    if isinstance(obj, dict):
        return {
            (",".join(map(str, k)) if isinstance(k, tuple) else str(k)): _jsonify(v)
            for k, v in obj.items()
        }
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonify(v) for v in items]
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, float, str)):
        return obj
    return str(obj)


def _rank_table_json(table: dict[tuple, int]) -> dict[str, int]:
    return {
        ",".join(map(str, key)): table[key]
        for key in sorted(k for k, v in table.items() if v)
    }


def _page_table_json(pages) -> dict:
    out = {}
    for r in range(pages.max_page + 1):
        out[str(r)] = _rank_table_json(pages.ranks[r])
    return {
        "max_page": pages.max_page,
        "ranks": out,
        "d_nonzero": {str(r): pages.d_nonzero[r] for r in sorted(pages.d_nonzero)},
    }


def _verdict_json(v: Verdict) -> dict:
    return {"name": v.name, "passed": v.passed, "details": _jsonify(v.details)}


def _load_word(braid: str, strands: int) -> BraidWord:
    try:
        return parse_braid_word(braid, strands)
    except BraidError as exc:
        raise click.ClickException(str(exc)) from None


def _cache_dir(flag_value: str | None) -> Path | None:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    if flag_value:
        return Path(flag_value)
    return None


def _cache_key(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _cache_load(cache: Path | None, key: str) -> bytes | None:
    if cache is None:
        return None
    path = cache / f"{key}.json"
    if path.is_file():
        return path.read_bytes()
    return None


def _cache_store(cache: Path | None, key: str, payload: bytes) -> None:
    if cache is None:
        return
    cache.mkdir(parents=True, exist_ok=True)
    (cache / f"{key}.json").write_bytes(payload)


def _render_table(report: dict, indent: str = "") -> str:
    """Aligned text rendering of a report dict (deterministic)."""
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            if value and all(isinstance(v, (int, float)) for v in value.values()):
                lines.append(f"{indent}{key}:")
                width = max(len(str(k)) for k in value)
                for k in value:
                    lines.append(f"{indent}  {str(k):<{width}}  {value[k]}")
            else:
                lines.append(f"{indent}{key}:")
                lines.append(_render_table(value, indent + "  "))
        elif isinstance(value, list):
            lines.append(f"{indent}{key}: {json.dumps(value)}")
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(line for line in lines if line)


def _emit(ctx, config: dict, build_report, fmt: str, cache_flag: str | None) -> None:
    """Compute (or fetch) the report, print it, exit nonzero on failure."""
    cache = _cache_dir(cache_flag)
    key = _cache_key(config)
    cached = _cache_load(cache, key)
    if cached is not None:
        payload = cached
        report = json.loads(payload.decode())
    else:
        started = time.perf_counter()
        report = dict(config)
        body, ok = build_report()
        report.update(body)
        report["ok"] = ok
        report["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
        payload = (json.dumps(report, indent=2) + "\n").encode()
        _cache_store(cache, key, payload)
    if fmt == "json":
        click.echo(payload.decode(), nl=False)
    else:
        click.echo(_render_table(report))
    if not report.get("ok", False):
        ctx.exit(1)


def _config(command: str, **inputs) -> dict:
    return {"schema": SCHEMA_VERSION, "command": command, "input": inputs}


fmt_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "table"]), default="json",
    show_default=True, help="Output format.",
)
cache_option = click.option(
    "--cache-dir", default=None, help=f"Cache directory (env {CACHE_ENV} overrides)."
)
braid_option = click.option(
    "--braid", default="", help='Braid word, e.g. "1 1 -2".', show_default=True
)
strands_option = click.option(
    "--strands", required=True, type=int, help="Number of braid strands."
)


@click.group()
@click.version_option(package_name="annulus-tate", prog_name="annulus-tate")
def main() -> None:
    """Annular Khovanov homology of 2-periodic links over F2."""


def _homology_command(name: str, theory: Theory, doc: str):
    @main.command(name, help=doc)
    @braid_option
    @strands_option
    @fmt_option
    @cache_option
    @click.pass_context
    def cmd(ctx, braid: str, strands: int, fmt: str, cache_dir: str | None):
        word = _load_word(braid, strands)
        config = _config(name, braid=word.as_text(), strands=strands)

        def build():
            run = PeriodicRun(word)
            table = run.quotient_homology(theory)
            body = {
                "ranks": _rank_table_json(table),
                "total_rank": total_rank(table),
            }
            return body, True

        _emit(ctx, config, build, fmt, cache_dir)

    return cmd


_homology_command("akh", Theory.AKH, "Annular Khovanov ranks per (i, j, k).")
_homology_command("kh", Theory.KH, "Khovanov ranks per (i, j) over F2.")


@main.command("resolve", help="Circles and seam parities of resolutions.")
@braid_option
@strands_option
@click.option("--alpha", default=None, help='Bitstring, crossing 0 first (e.g. "10").')
@fmt_option
@cache_option
@click.pass_context
def cmd_resolve(ctx, braid, strands, alpha, fmt, cache_dir):
    word = _load_word(braid, strands)
    diagram = close_braid(word)
    c = diagram.n_crossings
    if alpha is None and c > MAX_RESOLVE_LISTING:
        raise click.ClickException(
            f"{c} crossings: pass --alpha to pick one of the 2^{c} resolutions"
        )
    config = _config("resolve", braid=word.as_text(), strands=strands, alpha=alpha)

    def build():
        if alpha is not None:
            try:
                bits, width = parse_bits(alpha)
            except ValueError as exc:
                raise click.ClickException(str(exc)) from None
            if width != c:
                raise click.ClickException(
                    f"bitstring length {width} does not match {c} crossings"
                )
            vertices = [bits]
        else:
            vertices = range(1 << c)
        rows = []
        for v in vertices:
            res = resolve(diagram, v)
            rows.append(
                {
                    "alpha": format_bits(v, c),
                    "circles": res.n_circles,
                    "seam_counts": [circle.seam_count for circle in res.circles],
                    "trivial": [circle.trivial for circle in res.circles],
                }
            )
        return {"resolutions": rows}, True

    _emit(ctx, config, build, fmt, cache_dir)


def _periodic_verdicts(run: PeriodicRun, theory: str) -> list[Verdict]:
    verdicts: list[Verdict] = []
    if theory in ("both", "akh"):
        eq = check_equivariance(run.cover_complex(Theory.AKH), run.pairing)
        verdicts += [
            Verdict(
                "equivariance-akh", eq.ok,
                {"equivariant_generators": eq.n_equivariant},
            ),
            verify_e2_correspondence(run),
            verify_collapse(run, Theory.AKH),
            verify_diagonals(run),
            verify_rank_inequality(run),
        ]
    if theory in ("both", "kh"):
        eq = check_equivariance(run.cover_complex(Theory.KH), run.pairing)
        verdicts += [
            Verdict(
                "equivariance-kh", eq.ok,
                {"equivariant_generators": eq.n_equivariant},
            ),
            verify_collapse(run, Theory.KH),
            verify_khtate_limit(run),
            verify_cascade(run),
        ]
    cong = decat.check_congruences(
        run.word, quotient_ranks=run.quotient_homology(Theory.AKH)
    )
    verdicts.append(
        Verdict(
            "congruences", cong.ok,
            {
                "graded_ok": cong.graded_ok,
                "murasugi_ok": cong.murasugi_ok,
                "jones_ok": cong.jones_ok,
            },
        )
    )
    return verdicts


def _periodic_body(
    word: BraidWord, window: int | None, theory: str = "both"
) -> tuple[dict, bool]:
    run = PeriodicRun(word, window=window)
    verdicts = _periodic_verdicts(run, theory)
    body = {
        "proven_family": run.proven_family,
        "verdicts": [_verdict_json(v) for v in verdicts],
    }
    return body, not any(v.failed for v in verdicts)


@main.command("periodic", help="Verify the periodicity theorems for one quotient word.")
@braid_option
@strands_option
@click.option(
    "--theory", type=click.Choice(["both", "akh", "kh"]), default="both",
    show_default=True, help="Which Tate bicomplex checks to run.",
)
@click.option("--window", type=int, default=None, help="Tate window override.")
@fmt_option
@cache_option
@click.pass_context
def cmd_periodic(ctx, braid, strands, theory, window, fmt, cache_dir):
    word = _load_word(braid, strands)
    if len(word) > MAX_CORPUS_LENGTH:
        raise click.ClickException(
            f"quotient words are limited to {MAX_CORPUS_LENGTH} letters"
        )
    config = _config(
        "periodic", braid=word.as_text(), strands=strands, theory=theory,
        window=window,
    )
    _emit(ctx, config, lambda: _periodic_body(word, window, theory), fmt, cache_dir)


@main.command("decat", help="State sum, homology polynomial, and mod-2 congruences.")
@braid_option
@strands_option
@fmt_option
@cache_option
@click.pass_context
def cmd_decat(ctx, braid, strands, fmt, cache_dir):
    word = _load_word(braid, strands)
    if len(word) > MAX_CORPUS_LENGTH:
        raise click.ClickException(
            f"quotient words are limited to {MAX_CORPUS_LENGTH} letters"
        )
    config = _config("decat", braid=word.as_text(), strands=strands)

    def build():
        report = decat.check_congruences(word)
        bracket = decat.state_sum(close_braid(word))
        body = {
            "state_sum": bracket.to_quadruples(),
            "quotient_poly": report.quotient_poly.to_quadruples(),
            "cover_poly": report.cover_poly.to_quadruples(),
            "congruences": {
                "graded": report.graded_ok,
                "murasugi": report.murasugi_ok,
                "jones": report.jones_ok,
            },
        }
        return body, report.ok

    _emit(ctx, config, build, fmt, cache_dir)


def iter_corpus_words(max_strands: int, max_length: int):
    """Corpus order: strands ascending, length ascending, letters
    lexicographic in the alphabet 1, -1, 2, -2, ..."""
    import itertools

    for m in range(1, max_strands + 1):
        alphabet = [g for a in range(1, m) for g in (a, -a)]
        for length in range(max_length + 1):
            if length and not alphabet:
                continue
            for letters in itertools.product(alphabet, repeat=length):
                yield BraidWord(m, letters)


def _corpus_word_report(args: tuple[str, int, int | None]) -> dict:
    braid, strands, window = args
    word = parse_braid_word(braid, strands)
    config = _config(
        "periodic", braid=braid, strands=strands, theory="both", window=window
    )
    started = time.perf_counter()
    report = dict(config)
    body, ok = _periodic_body(word, window)
    report.update(body)
    report["ok"] = ok
    report["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    return report


@main.command("corpus", help="Run the periodic verification over all small words.")
@click.option("--max-strands", type=int, default=3, show_default=True)
@click.option("--max-length", type=int, default=3, show_default=True)
@click.option("--window", type=int, default=None, help="Tate window override.")
@click.option("--jobs", type=int, default=None, help="Worker processes (default: CPUs).")
@fmt_option
@cache_option
@click.pass_context
def cmd_corpus(ctx, max_strands, max_length, window, jobs, fmt, cache_dir):
    if max_length > MAX_CORPUS_LENGTH:
        raise click.ClickException(f"--max-length is capped at {MAX_CORPUS_LENGTH}")
    if max_strands > MAX_CORPUS_STRANDS:
        raise click.ClickException(f"--max-strands is capped at {MAX_CORPUS_STRANDS}")
    if jobs is None:
        jobs = os.cpu_count() or 1
    config = _config(
        "corpus",
        max_strands=max_strands,
        max_length=max_length,
        window=window,
    )
    cache = _cache_dir(cache_dir)

    def build():
        words = list(iter_corpus_words(max_strands, max_length))
        tasks = [(w.as_text(), w.strands, window) for w in words]
        reports: list[dict] = []
        pending: list[tuple[int, tuple]] = []
        for idx, task in enumerate(tasks):
            key = _cache_key(
                _config(
                    "periodic", braid=task[0], strands=task[1],
                    theory="both", window=task[2],
                )
            )
            cached = _cache_load(cache, key)
            if cached is not None:
                reports.append(json.loads(cached.decode()))
            else:
                reports.append({})
                pending.append((idx, task))
        if pending:
            if jobs > 1 and len(pending) > 1:
                with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
                    fresh = list(pool.map(_corpus_word_report, [t for _, t in pending]))
            else:
                fresh = [_corpus_word_report(t) for _, t in pending]
            for (idx, task), rep in zip(pending, fresh):
                reports[idx] = rep
                key = _cache_key(
                    _config(
                        "periodic", braid=task[0], strands=task[1],
                        theory="both", window=task[2],
                    )
                )
                _cache_store(cache, key, (json.dumps(rep, indent=2) + "\n").encode())
        summary = []
        failures = []
        for word, rep in zip(words, reports):
            entry = {
                "braid": word.as_text(),
                "strands": word.strands,
                "ok": rep.get("ok", False),
            }
            summary.append(entry)
            if not entry["ok"]:
                failures.append(
                    {
                        **entry,
                        "repro": f'annulus-tate periodic --braid "{word.as_text()}" '
                        f"--strands {word.strands}",
                    }
                )
        body = {
            "words": summary,
            "failures": failures,
            "counts": {
                "words": len(words),
                "passed": sum(1 for s in summary if s["ok"]),
                "failed": len(failures),
            },
        }
        return body, not failures

    _emit(ctx, config, build, fmt, cache_dir)


if __name__ == "__main__":
    main()
