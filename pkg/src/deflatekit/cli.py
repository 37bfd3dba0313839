"""Command-line frontend: compress, decompress, and two inspection modes.

Exit codes: 0 success, 1 malformed input (message includes the bit
offset when the deflate stream itself is at fault), 2 usage errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

from .bitio import BitCursor
from .compress import CompressParams, deflate
from .errors import DeflateError, InflateError
from .gzip_container import gzip_compress, gzip_decompress
from .history_window import BackRef, EndOfBlock, Literal
from .inflate import (
    BlockType,
    NoParse,
    Parsed,
    inflate,
    parse_block_header,
    parse_compressed_tokens,
    parse_dynamic_header,
    parse_stored_block,
)
from .prefix_coding import build_coding, fixed_dist_coding, fixed_lit_coding


@dataclass(frozen=True)
class CliConfig:
    mode: str
    fmt: str = "gzip"
    window_impl: str = "ring"
    input_path: str = "-"
    output_path: Optional[str] = None
    max_chain: int = 128
    block_limit: int = 1 << 20
    lengths: Optional[tuple[int, ...]] = None
    max_len: int = 15


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deflatekit",
        description="Deflate codec: compress, decompress, and inspect streams.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)

    comp = sub.add_parser("compress", help="compress a file or stdin")
    comp.add_argument("input", nargs="?", default="-", help="input path, - for stdin")
    comp.add_argument("-o", "--output", help="output path, - for stdout")
    comp.add_argument(
        "-f", "--format", choices=("raw", "gzip"), default="gzip", dest="fmt",
        help="raw deflate stream or gzip container (default gzip)",
    )
    comp.add_argument("--max-chain", type=int, default=128, metavar="N",
                      help="match candidates examined per position")
    comp.add_argument("--block-limit", type=int, default=1 << 20, metavar="N",
                      help="source bytes per block")

    deco = sub.add_parser("decompress", help="decompress a file or stdin")
    deco.add_argument("input", nargs="?", default="-")
    deco.add_argument("-o", "--output")
    deco.add_argument("-f", "--format", choices=("raw", "gzip"), default="gzip",
                      dest="fmt")
    deco.add_argument("--window-impl", choices=("queue", "ring"), default="ring",
                      help="history window representation (identical results)")

    coding = sub.add_parser("dump-coding",
                            help="show the canonical coding for a length vector")
    coding.add_argument("lengths",
                        help="comma-separated code lengths, e.g. 2,1,3,3,0")
    coding.add_argument("--max-len", type=int, default=15)

    tokens = sub.add_parser("dump-tokens",
                            help="list the tokens of each block of a stream")
    tokens.add_argument("input", nargs="?", default="-")
    tokens.add_argument("-f", "--format", choices=("raw", "gzip"), default="raw",
                        dest="fmt", help="dump-tokens defaults to raw deflate input")
    return parser


def _config_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> CliConfig:
    lengths = None
    if args.mode == "dump-coding":
        try:
            lengths = tuple(int(part) for part in args.lengths.split(","))
        except ValueError:
            parser.error(f"cannot parse length vector {args.lengths!r}")
    cfg = CliConfig(
        mode=args.mode,
        fmt=getattr(args, "fmt", "raw"),
        window_impl=getattr(args, "window_impl", "ring"),
        input_path=getattr(args, "input", "-"),
        output_path=getattr(args, "output", None),
        max_chain=getattr(args, "max_chain", 128),
        block_limit=getattr(args, "block_limit", 1 << 20),
        lengths=lengths,
        max_len=getattr(args, "max_len", 15),
    )
    if cfg.output_path and cfg.output_path != "-" and cfg.output_path == cfg.input_path:
        parser.error("input and output must be different paths")
    return cfg


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write_output(path: Optional[str], data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _dump_coding(cfg: CliConfig) -> None:
    coding = build_coding(list(cfg.lengths), cfg.max_len)
    for ch, code in enumerate(coding.codes):
        shown = "".join(map(str, code)) if code else "(absent)"
        print(f"{ch}: {shown}")


def _token_line(token) -> str:
    if isinstance(token, Literal):
        shown = chr(token.value) if 32 <= token.value < 127 else "."
        return f"literal {token.value} {shown!r}"
    if isinstance(token, BackRef):
        return f"backref <{token.length},{token.distance}>"
    return "end-of-block"


def _dump_tokens(cfg: CliConfig, data: bytes) -> None:
    if cfg.fmt == "gzip":
        from .gzip_container import gzip_unwrap

        data, _, _ = gzip_unwrap(data)
    pos = 0
    block = 0
    while True:
        header_outcome = parse_block_header(BitCursor(data, pos))
        if isinstance(header_outcome, NoParse):
            raise InflateError(
                header_outcome.reason.value, header_outcome.bit_pos, header_outcome.detail
            )
        header = header_outcome.value
        pos = header_outcome.rest.bit_pos
        kind = header.block_type.name.lower()
        final = " final" if header.is_final else ""
        print(f"block {block} ({kind}{final})")
        if header.block_type is BlockType.STORED:
            outcome = parse_stored_block(BitCursor(data, pos))
            if isinstance(outcome, NoParse):
                raise InflateError(outcome.reason.value, outcome.bit_pos, outcome.detail)
            print(f"  stored {len(outcome.value)} bytes")
            pos = outcome.rest.bit_pos
        else:
            if header.block_type is BlockType.STATIC:
                lit_coding, dist_coding = fixed_lit_coding(), fixed_dist_coding()
            else:
                dyn = parse_dynamic_header(BitCursor(data, pos))
                if isinstance(dyn, NoParse):
                    raise InflateError(dyn.reason.value, dyn.bit_pos, dyn.detail)
                lit_coding, dist_coding = dyn.value.lit_coding, dyn.value.dist_coding
                pos = dyn.rest.bit_pos
            outcome = parse_compressed_tokens(BitCursor(data, pos), lit_coding, dist_coding)
            if isinstance(outcome, NoParse):
                raise InflateError(outcome.reason.value, outcome.bit_pos, outcome.detail)
            for token in outcome.value:
                print(f"  {_token_line(token)}")
            pos = outcome.rest.bit_pos
        if header.is_final:
            break
        block += 1


def run(cfg: CliConfig) -> int:
    """Execute one configured invocation; returns the exit status."""
    try:
        if cfg.mode == "dump-coding":
            _dump_coding(cfg)
            return 0
        data = _read_input(cfg.input_path)
        if cfg.mode == "compress":
            params = CompressParams(
                max_chain=cfg.max_chain, block_payload_limit=cfg.block_limit
            )
            if cfg.fmt == "gzip":
                out = gzip_compress(data, params)
            else:
                out = deflate(data, params)
            _write_output(cfg.output_path, out)
        elif cfg.mode == "decompress":
            if cfg.fmt == "gzip":
                out = gzip_decompress(data, cfg.window_impl)
            else:
                out = inflate(data, cfg.window_impl)
            _write_output(cfg.output_path, out)
        elif cfg.mode == "dump-tokens":
            _dump_tokens(cfg, data)
        else:
            raise AssertionError(f"unhandled mode {cfg.mode}")
    except DeflateError as e:
        print(f"deflatekit: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"deflatekit: {e}", file=sys.stderr)
        return 1
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    return run(_config_from_args(args, parser))


if __name__ == "__main__":
    sys.exit(main())
