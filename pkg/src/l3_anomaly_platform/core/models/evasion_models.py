from typing import Dict

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Latin source -> visually confusable code point.
DEFAULT_HYPOGLYPHS: Dict[str, str] = {
    "C": "С",  # Cyrillic capital Es
    "e": "е",  # Cyrillic small ie
    "q": "՛",  # Armenian emphasis mark
}


class HypoglyphMap(BaseModel):
    """Injective code point substitution used to disguise message names in the SDL."""
    model_config = ConfigDict(frozen=True)

    entries: Dict[str, str] = Field(default_factory=lambda: dict(DEFAULT_HYPOGLYPHS))

    @model_validator(mode="after")
    def _check_entries(self) -> "HypoglyphMap":
        for source, target in self.entries.items():
            if len(source) != 1 or len(target) != 1:
                raise ValueError(f"entries must map single code points, got {source!r} -> {target!r}")
            if source == target:
                raise ValueError(f"entry for {source!r} maps the code point to itself")
        if len(set(self.entries.values())) != len(self.entries):
            raise ValueError("hypoglyph map must be injective")
        if set(self.entries.values()) & set(self.entries):
            raise ValueError("a confusable target must not also be a mapped source")
        return self

    @classmethod
    def default(cls) -> "HypoglyphMap":
        return cls()

    def forward_table(self) -> Dict[int, str]:
        return str.maketrans(self.entries)

    def inverse_table(self) -> Dict[int, str]:
        return str.maketrans({target: source for source, target in self.entries.items()})
