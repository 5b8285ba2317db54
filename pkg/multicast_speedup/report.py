from typing import Dict, List, Sequence
from fractions import Fraction

import pandas as pd

from .rational_core import format_rational


class SweepTable:
    """Tabulates the chi_f values found by a vertex sweep."""

    def __init__(self, values: Sequence[Fraction]):
        self.values = list(values)

    def histogram(self) -> pd.DataFrame:
        counts = pd.Series(self.values, dtype=object).value_counts(sort=False)
        rows = [(format_rational(value), int(counts.loc[value])) for value in sorted(counts.index)]
        return pd.DataFrame.from_records(data=rows, columns=['value', 'vertices'])

    def maximum(self) -> Fraction:
        if not self.values:
            return Fraction(0)
        return max(self.values)

    def summary(self) -> Dict[str, object]:
        return {
            'vertices': len(self.values),
            'maximum': format_rational(self.maximum()),
            'histogram': frame_to_records(self.histogram()),
        }


def frame_to_records(df: pd.DataFrame) -> List[dict]:
    return [
        {column: (value.item() if hasattr(value, 'item') else value) for column, value in row.items()}
        for row in df.to_dict(orient='records')
    ]
