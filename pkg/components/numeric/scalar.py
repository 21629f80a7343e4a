import logging
import re
from collections import defaultdict
from fractions import Fraction
from typing import Annotated, Any, Iterable, Iterator, List, Optional, Tuple, Union

from pydantic import PlainSerializer, PlainValidator, WithJsonSchema

# -----------------------------
# Logging
# -----------------------------
logger = logging.getLogger(__name__)

# -----------------------------
# Configuration
# -----------------------------
IMAGINARY_UNIT = "i"
# the unicode minus shows up when values are pasted from typeset tables
MINUS_SIGNS = ("-", "−")


class ScalarParseError(ValueError):
    """Raised when a scalar literal does not follow the literal grammar"""

    def __init__(self, text: str, token: str, reason: str = "unexpected token"):
        self.text = text
        self.token = token
        super().__init__(f"{reason} {token!r} in scalar literal {text!r}")


class ScalarOrderError(TypeError):
    """Raised when a Gaussian value with a nonzero imaginary part is ordered"""


# -----------------------------
# Gaussian rationals
# -----------------------------
class GaussianRational:
    """a + b·i with rational a and b; immutable"""

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        object.__setattr__(self, "real", Fraction(real))
        object.__setattr__(self, "imag", Fraction(imag))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _new(cls, real: Fraction, imag: Fraction) -> "GaussianRational":
        """Build from parts that are already Fractions"""
        obj = object.__new__(cls)
        object.__setattr__(obj, "real", real)
        object.__setattr__(obj, "imag", imag)
        return obj

    @staticmethod
    def _parts(other) -> Tuple[Fraction, Fraction]:
        if isinstance(other, GaussianRational):
            return other.real, other.imag
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Fraction(other), Fraction(0)
        return None, None

    def __add__(self, other):
        x, y = self._parts(other)
        if x is None:
            return NotImplemented
        return GaussianRational._new(self.real + x, self.imag + y)

    __radd__ = __add__

    def __sub__(self, other):
        x, y = self._parts(other)
        if x is None:
            return NotImplemented
        return GaussianRational._new(self.real - x, self.imag - y)

    def __rsub__(self, other):
        x, y = self._parts(other)
        if x is None:
            return NotImplemented
        return GaussianRational._new(x - self.real, y - self.imag)

    def __mul__(self, other):
        x, y = self._parts(other)
        if x is None:
            return NotImplemented
        return GaussianRational._new(self.real * x - self.imag * y, self.real * y + self.imag * x)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational._new(-self.real, -self.imag)

    def __pos__(self):
        return self

    def __eq__(self, other):
        x, y = self._parts(other)
        if x is None:
            return NotImplemented
        return self.real == x and self.imag == y

    def __hash__(self):
        # equal values must hash alike across int, Fraction and GaussianRational
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def _real_for_order(self, other) -> Tuple[Fraction, Fraction]:
        x, y = self._parts(other)
        if x is None:
            return None, None
        if self.imag != 0 or y != 0:
            raise ScalarOrderError(
                f"cannot order {format_scalar(self)} and {format_scalar(other)}: "
                "Gaussian values with a nonzero imaginary part have no order"
            )
        return self.real, x

    def __lt__(self, other):
        a, b = self._real_for_order(other)
        return NotImplemented if a is None else a < b

    def __le__(self, other):
        a, b = self._real_for_order(other)
        return NotImplemented if a is None else a <= b

    def __gt__(self, other):
        a, b = self._real_for_order(other)
        return NotImplemented if a is None else a > b

    def __ge__(self, other):
        a, b = self._real_for_order(other)
        return NotImplemented if a is None else a >= b

    def __repr__(self):
        return f"GaussianRational({self.real!s}, {self.imag!s})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, GaussianRational]


def normalize(x: Scalar) -> Scalar:
    """Collapse a value to the narrowest kind: Gaussian -> Rational -> Integer"""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, GaussianRational):
        if x.imag != 0:
            return x
        x = x.real
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    raise TypeError(f"not a scalar: {x!r}")


def scalar_kind(x: Scalar) -> str:
    x = normalize(x)
    if isinstance(x, GaussianRational):
        return "GaussianRational"
    if isinstance(x, Fraction):
        return "Rational"
    return "Integer"


def real_part(x: Scalar) -> Fraction:
    return x.real if isinstance(x, GaussianRational) else Fraction(x)


def imag_part(x: Scalar) -> Fraction:
    return x.imag if isinstance(x, GaussianRational) else Fraction(0)


def scalar_sort_key(x: Scalar) -> Tuple[Fraction, Fraction]:
    """Total order over all scalars (real part first, then imaginary part)"""
    return real_part(x), imag_part(x)


def scalar_sum(values: Iterable[Scalar]) -> Scalar:
    """Exact sum; numerators are accumulated per denominator so long lines stay cheap"""
    real = defaultdict(int)
    imag = defaultdict(int)
    for x in values:
        if type(x) is int:
            real[1] += x
        elif isinstance(x, Fraction):
            real[x.denominator] += x.numerator
        elif isinstance(x, GaussianRational):
            real[x.real.denominator] += x.real.numerator
            imag[x.imag.denominator] += x.imag.numerator
        else:
            raise TypeError(f"not a scalar: {x!r}")
    total_real = sum((Fraction(n, d) for d, n in real.items()), Fraction(0))
    total_imag = sum((Fraction(n, d) for d, n in imag.items()), Fraction(0))
    return normalize(GaussianRational(total_real, total_imag))


# -----------------------------
# Literal grammar
# -----------------------------
_TOKEN = re.compile(r"\s*(?:(?P<digits>\d+)|(?P<op>[+/i\-−])|(?P<stray>\S))")


def _tokenize(text: str) -> Iterator[str]:
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            # only trailing whitespace left
            return
        if match.group("stray") is not None:
            raise ScalarParseError(text, match.group("stray"), "stray character")
        yield match.group("digits") or match.group("op")
        pos = match.end()


# the forms format_scalar writes; anything else goes through the full parser
_CANONICAL = re.compile(r"(?P<real>-?[0-9]+(?:/[0-9]+)?)(?:(?P<sign>[+-])(?P<imag>[0-9]+(?:/[0-9]+)?)?i)?")


def _canonical_rational(text: str) -> Optional[Scalar]:
    numerator, _, denominator = text.partition("/")
    if not denominator:
        return int(numerator)
    if int(denominator) == 0:
        return None
    return Fraction(int(numerator), int(denominator))


def _parse_canonical(text: str) -> Optional[Scalar]:
    match = _CANONICAL.fullmatch(text)
    if match is None:
        return None
    real = _canonical_rational(match.group("real"))
    if real is None or match.group("sign") is None:
        return None if real is None else normalize(real)
    imag = _canonical_rational(match.group("imag") or "1")
    if imag is None:
        return None
    return normalize(GaussianRational(real, -imag if match.group("sign") == "-" else imag))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: List[str] = list(_tokenize(text))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        token = self.peek()
        self.pos += 1
        return token

    def sign(self) -> int:
        token = self.peek()
        if token == "+":
            self.take()
            return 1
        if token in MINUS_SIGNS:
            self.take()
            return -1
        return 0

    def magnitude(self):
        token = self.peek()
        if token is None or not token.isdigit():
            return None
        numerator = int(self.take())
        if self.peek() != "/":
            return Fraction(numerator)
        self.take()
        token = self.take()
        if token is None:
            raise ScalarParseError(self.text, "/", "missing denominator after")
        if not token.isdigit():
            raise ScalarParseError(self.text, token, "bad denominator")
        if int(token) == 0:
            raise ScalarParseError(self.text, f"{numerator}/{token}", "zero denominator")
        return Fraction(numerator, int(token))

    def term(self, need_sign: bool):
        """Returns (value, is_imaginary)"""
        start = self.peek()
        sign = self.sign()
        if need_sign and sign == 0:
            raise ScalarParseError(self.text, start, "expected sign before")
        value = self.magnitude()
        if self.peek() == IMAGINARY_UNIT:
            self.take()
            value = Fraction(1) if value is None else value
            return (-value if sign < 0 else value), True
        if value is None:
            token = self.peek()
            raise ScalarParseError(self.text, token if token is not None else start or "", "expected number at")
        return (-value if sign < 0 else value), False

    def parse(self) -> Scalar:
        if not self.tokens:
            raise ScalarParseError(self.text, self.text, "empty literal")
        value, imaginary = self.term(need_sign=False)
        if imaginary:
            result = GaussianRational(0, value)
        elif self.peek() is None:
            result = value
        else:
            imag, imaginary = self.term(need_sign=True)
            if not imaginary:
                raise ScalarParseError(self.text, self.tokens[self.pos - 1], "second term must be imaginary, got")
            result = GaussianRational(value, imag)
        if self.peek() is not None:
            raise ScalarParseError(self.text, self.peek(), "trailing token")
        return normalize(result)


def parse_scalar(text: str) -> Scalar:
    """Parse '-5', '27/2', '1+i', '1/2-3/2i', '3i' into an exact scalar"""
    if not isinstance(text, str):
        raise TypeError(f"scalar literal must be a string, got {type(text).__name__}")
    value = _parse_canonical(text)
    return _Parser(text).parse() if value is None else value


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    x = normalize(x)
    if not isinstance(x, GaussianRational):
        return _format_rational(Fraction(x))
    coefficient = "" if abs(x.imag) == 1 else _format_rational(abs(x.imag))
    if x.real == 0:
        return f"{'-' if x.imag < 0 else ''}{coefficient}{IMAGINARY_UNIT}"
    return f"{_format_rational(x.real)}{'-' if x.imag < 0 else '+'}{coefficient}{IMAGINARY_UNIT}"


def coerce_scalar(value) -> Scalar:
    """Accept a literal string or any scalar value"""
    if isinstance(value, str):
        return parse_scalar(value)
    return normalize(value)


# -----------------------------
# Model field
# -----------------------------
# Scalars inside pydantic models validate from literals and dump as canonical literals
ScalarValue = Annotated[
    Any,
    PlainValidator(coerce_scalar),
    PlainSerializer(format_scalar, return_type=str),
    WithJsonSchema({"type": "string", "description": "scalar literal, e.g. -5, 27/2, 1+i"}),
]
