"""
Degree histograms from edge lists and histogram CSV files.
"""

import logging
from pathlib import Path
from typing import Iterator, Tuple

import networkx as nx
import pandas as pd

from core.exceptions import DataError, EmptyInputError
from core.formatting import write_table
from networks.models import DegreeHistogram, DegreeMode, EdgeListSpec, SelfLoopPolicy

logger = logging.getLogger(__name__)

HISTOGRAM_COLUMNS = ['degree', 'count']
PMF_COLUMNS = ('mean_probability', 'probability')
PMF_TABLE_TOTAL = 10 ** 9


class IngestService:
    """
    Service class for reading degree data.

    Node identifiers are opaque strings; networkx maps them to nodes.
    """

    @staticmethod
    def read_edges(spec: EdgeListSpec) -> Iterator[Tuple[str, str, int]]:
        """Yield (source, target, line number) for every edge line."""
        try:
            handle = spec.path.open(encoding='utf-8')
        except OSError as exc:
            raise DataError(f"cannot read edge list: {exc.strerror}", path=spec.path) from exc

        separator = None
        detected = False
        with handle:
            for number, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line or (spec.comment_prefix and line.startswith(spec.comment_prefix)):
                    continue
                if not detected:
                    separator = spec.separator(line)
                    detected = True
                tokens = [token.strip() for token in line.split(separator)]
                tokens = [token for token in tokens if token]
                if len(tokens) < 2:
                    raise DataError(
                        f"expected two node identifiers, got {line!r}",
                        line=number, path=spec.path,
                    )
                yield tokens[0], tokens[1], number

    @staticmethod
    def build_graph(spec: EdgeListSpec) -> nx.Graph:
        """A (multi)graph of the edge list, honouring dedup and the self-loop policy."""
        if spec.is_directed:
            graph = nx.DiGraph() if spec.dedup else nx.MultiDiGraph()
        else:
            graph = nx.Graph() if spec.dedup else nx.MultiGraph()

        for source, target, _ in IngestService.read_edges(spec):
            if source == target and spec.self_loop_policy == SelfLoopPolicy.DROP:
                continue
            graph.add_edge(source, target)
        return graph

    @staticmethod
    def parse_edge_list(spec: EdgeListSpec) -> DegreeHistogram:
        """
        Histogram of per-node degree under spec.degree_mode.

        Nodes whose chosen degree is 0 are not counted.

        Raises:
            DataError: On malformed lines (with the line number)
            EmptyInputError: If the file holds no edges
        """
        graph = IngestService.build_graph(spec)
        if graph.number_of_edges() == 0:
            raise EmptyInputError("edge list contains no edges", path=spec.path)

        if spec.degree_mode == DegreeMode.IN:
            degrees = graph.in_degree()
        elif spec.degree_mode == DegreeMode.OUT:
            degrees = graph.out_degree()
        else:
            degrees = graph.degree()

        hist = DegreeHistogram.from_degrees([d for _, d in degrees if d > 0])
        logger.info(
            f"Read {graph.number_of_edges()} edges and {graph.number_of_nodes()} nodes "
            f"from {spec.path} ({spec.degree_mode} degree)"
        )
        return hist

    @staticmethod
    def parse_histogram(path) -> DegreeHistogram:
        """
        Read a "degree,count" CSV. The header row is required.

        Raises:
            DataError: On a missing or wrong header, non-integer or negative values, duplicate degrees
            EmptyInputError: If there are no rows
        """
        path = Path(path)
        try:
            frame = pd.read_csv(path, dtype=str, header=None, skip_blank_lines=True)
        except FileNotFoundError as exc:
            raise DataError("file not found", path=path) from exc
        except pd.errors.EmptyDataError as exc:
            raise EmptyInputError("histogram file is empty", path=path) from exc
        except pd.errors.ParserError as exc:
            raise DataError(f"malformed CSV: {exc}", path=path) from exc

        if frame.shape[1] != 2:
            raise DataError(f"expected 2 columns, got {frame.shape[1]}", line=1, path=path)

        rows = [tuple(row) for row in frame.itertuples(index=False, name=None)]
        header = [str(value).strip().lower() for value in rows[0]]
        if header != HISTOGRAM_COLUMNS:
            raise DataError(f"header must be 'degree,count', got {','.join(header)!r}", line=1, path=path)
        rows = rows[1:]
        if not rows:
            raise EmptyInputError("histogram has no rows", path=path)

        counts = {}
        for offset, (degree_text, count_text) in enumerate(rows):
            line = 2 + offset
            degree = _parse_nonnegative(degree_text, 'degree', line, path)
            count = _parse_nonnegative(count_text, 'count', line, path)
            if degree in counts:
                raise DataError(f"duplicate degree {degree}", line=line, path=path)
            counts[degree] = count

        if not any(counts.values()):
            raise EmptyInputError("histogram has no nonzero counts", path=path)
        return DegreeHistogram(counts=counts, starting_degree=0 if 0 in counts else 1)

    @staticmethod
    def parse_pmf_table(path, total: int = PMF_TABLE_TOTAL) -> DegreeHistogram:
        """
        Read a pmf table (the CSV the simulate and eval commands write) and
        scale it to counts over `total` nodes so it can be fitted.

        The first column must be "degree"; the probability column is
        "mean_probability" or "probability".
        """
        path = Path(path)
        try:
            frame = pd.read_csv(path)
        except FileNotFoundError as exc:
            raise DataError("file not found", path=path) from exc
        except pd.errors.EmptyDataError as exc:
            raise EmptyInputError("pmf table is empty", path=path) from exc
        except pd.errors.ParserError as exc:
            raise DataError(f"malformed CSV: {exc}", path=path) from exc

        column = next((name for name in PMF_COLUMNS if name in frame.columns), None)
        if 'degree' not in frame.columns or column is None:
            raise DataError(
                f"expected columns 'degree' and one of {', '.join(PMF_COLUMNS)}", line=1, path=path,
            )
        if frame.empty:
            raise EmptyInputError("pmf table has no rows", path=path)

        degrees = pd.to_numeric(frame['degree'], errors='coerce')
        probabilities = pd.to_numeric(frame[column], errors='coerce')
        bad = degrees.isna() | probabilities.isna() | (degrees < 0) | (probabilities < 0)
        if bad.any():
            line = int(bad.idxmax()) + 2
            raise DataError("degree and probability must be nonnegative numbers", line=line, path=path)

        counts = {}
        for degree, probability in zip(degrees.astype(int), probabilities):
            count = int(round(probability * total))
            if count > 0:
                counts[int(degree)] = counts.get(int(degree), 0) + count
        if not counts:
            raise EmptyInputError("pmf table has no mass", path=path)
        return DegreeHistogram(counts=counts, starting_degree=0 if 0 in counts else 1)

    @staticmethod
    def emit_histogram(hist: DegreeHistogram, path) -> Path:
        """
        Write the canonical sorted "degree,count" CSV.

        Degrees with a zero count are not kept by DegreeHistogram, so they
        never appear in the output.
        """
        return write_table(
            path,
            {'degree': list(hist.counts.keys()), 'count': list(hist.counts.values())},
            integer_columns=HISTOGRAM_COLUMNS,
        )


def _parse_nonnegative(text, name: str, line: int, path: Path) -> int:
    text = '' if text is None or (isinstance(text, float)) else str(text).strip()
    try:
        value = int(text)
    except ValueError:
        raise DataError(f"{name} {text!r} is not an integer", line=line, path=path) from None
    if value < 0:
        raise DataError(f"negative {name} {value}", line=line, path=path)
    return value
