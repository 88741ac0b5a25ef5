import enum


class Label(enum.IntEnum):
    """Binary news label; the integer value is the classifier target."""

    FAKE = -1
    TRUE = 1

    @property
    def dirname(self):
        return self.name.lower()

    @classmethod
    def parse(cls, value):
        if isinstance(value, Label):
            return value
        if isinstance(value, str):
            try:
                return cls[value.upper()]
            except KeyError:
                pass
        else:
            try:
                return cls(int(value))
            except ValueError:
                pass
        raise ValueError(f"unknown label {value!r}")
