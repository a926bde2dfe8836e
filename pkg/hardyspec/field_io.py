'''
CFLD1 binary field files and CSV export.

Layout, all little-endian:

    magic        5 bytes  b'CFLD1'
    n            uint8
    dims         n x uint64
    extent       n x float64
    tag length   uint8, followed by the ASCII blade_order tag
    payload      row-major grid scan; per point 2^n coefficients in bitmask blade order,
                 each as two float64 (re, im)

Writing then reading a field reproduces its samples bit for bit.
'''

import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from hardyspec.clifford_core import blade_name
from hardyspec.errors import FieldFormatError
from hardyspec.numerics_config import BLADE_ORDER, FIELD_MAGIC, MAX_DIMENSION
from hardyspec.spectral import FieldHeader, GridField

logger = logging.getLogger(__name__)

PAYLOAD_DTYPE = np.dtype('<c16')


def encode_header(header):
    tag = header.blade_order.encode('ascii')
    return b''.join(
        [
            FIELD_MAGIC,
            np.uint8(header.n).tobytes(),
            np.array(header.dims, dtype='<u8').tobytes(),
            np.array(header.extent, dtype='<f8').tobytes(),
            np.uint8(len(tag)).tobytes(),
            tag,
        ]
    )


def encode_field(field):
    # (2^n, *dims) -> (*dims, 2^n): blades vary fastest within each grid point
    payload = np.ascontiguousarray(np.moveaxis(field.samples, 0, -1), dtype=PAYLOAD_DTYPE)
    return encode_header(field.header) + payload.tobytes()


def _take(data, offset, count, what):
    if offset + count > len(data):
        raise FieldFormatError(f'Truncated field file while reading {what}')
    return data[offset : offset + count], offset + count


def decode_field(data):
    '''Parse CFLD1 bytes into a GridField'''
    magic, offset = _take(data, 0, len(FIELD_MAGIC), 'magic')
    if magic != FIELD_MAGIC:
        raise FieldFormatError(f'Not a CFLD1 file (magic {magic!r})')
    raw, offset = _take(data, offset, 1, 'n')
    n = int(raw[0])
    if not 1 <= n <= MAX_DIMENSION:
        raise FieldFormatError(f'Dimension {n} outside [1, {MAX_DIMENSION}]')
    raw, offset = _take(data, offset, 8 * n, 'dims')
    dims = tuple(int(d) for d in np.frombuffer(raw, dtype='<u8'))
    raw, offset = _take(data, offset, 8 * n, 'extent')
    extent = tuple(float(length) for length in np.frombuffer(raw, dtype='<f8'))
    raw, offset = _take(data, offset, 1, 'tag length')
    tag, offset = _take(data, offset, raw[0], 'blade order tag')
    tag = tag.decode('ascii', errors='replace')
    if tag != BLADE_ORDER:
        raise FieldFormatError(f'Unsupported blade order {tag!r}, expected {BLADE_ORDER!r}')
    try:
        header = FieldHeader(n=n, dims=dims, extent=extent, blade_order=tag)
    except ValidationError as e:
        raise FieldFormatError(f'Invalid field header: {e}') from e

    expected = header.n_points * header.n_blades * PAYLOAD_DTYPE.itemsize
    if len(data) - offset != expected:
        raise FieldFormatError(
            f'Payload has {len(data) - offset} bytes, header requires {expected}'
        )
    payload = np.frombuffer(data, dtype=PAYLOAD_DTYPE, offset=offset)
    samples = np.moveaxis(payload.reshape(*dims, header.n_blades), -1, 0)
    return GridField(header, samples)


def write_field(path, field):
    Path(path).write_bytes(encode_field(field))
    logger.info(f'Wrote {path} ({field.header.dims}, n={field.header.n})')


def read_field(path):
    path = Path(path)
    if not path.is_file():
        raise FieldFormatError(f'No field file at {path}')
    field = decode_field(path.read_bytes())
    logger.debug(f'Read {path}: {field.header}')
    return field


def export_csv(path, field):
    '''
    One row per grid point: coordinates, then re/im of every blade, '%.9g' precision.
    Lossy; for inspection only.
    '''
    header = field.header
    coordinates = header.coordinate_grid().reshape(header.n, -1).T
    values = field.samples.reshape(header.n_blades, -1).T
    columns = np.column_stack([coordinates, values.real, values.imag])
    names = [f'x{k}' for k in range(1, header.n + 1)]
    names += [f're_{blade_name(t)}' for t in range(header.n_blades)]
    names += [f'im_{blade_name(t)}' for t in range(header.n_blades)]
    np.savetxt(path, columns, fmt='%.9g', delimiter=',', header=','.join(names), comments='')
    logger.info(f'Exported {header.n_points} points to {path}')
