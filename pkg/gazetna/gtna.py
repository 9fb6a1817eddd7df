from typing import Optional, Tuple


class GazeTna:
    DEFAULT_ALPHA = 0.5
    DEFAULT_GAP_MS = 300
    DEFAULT_MIN_PROB = 0.0
    DEFAULT_MOTIF_THRESHOLD = 0.15

    # Table order defines matrix row/column order.
    DEFAULT_AOIS: Tuple[str, ...] = (
        'Equipment - Airway',
        'Equipment - CPR',
        'Equipment - Defib',
        'Equipment - Meds & IV',
        'Patient Vitals Monitor',
        'Other Team Members',
        'Patient',
    )

    SIGNIFICANT_DIGITS = 6
    NETWORK_SCHEMA = 'gazetna.network/1'

    FIXATION_COLUMNS = ('session_id', 'participant_id', 'role', 'start_ms', 'end_ms', 'object_id', 'kind')
    STAGE_COLUMNS = ('session_id', 'stage_label', 'start_ms', 'end_ms')
    AOI_MAP_COLUMNS = ('object_id', 'aoi_label')
    AOI_HEADER_PREFIX = 'aois:'

    EXIT_OK = 0
    EXIT_INPUT_ERROR = 2
    EXIT_CONFIG_ERROR = 3
    EXIT_INTERNAL_ERROR = 4

    class Error(Exception):

        exit_code = 4

        def __init__(self, message: str, *args):
            super().__init__(message, *args)
            self.message = message

        def __str__(self):
            return self.message

    class InputError(Error):

        exit_code = 2

        def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
            self.line = line
            self.field = field
            if line is not None:
                message = f'{message} at line {line}'
            if field is not None:
                message = f'{message} (field {field})'
            super().__init__(message)

    class ValidationError(InputError):
        ...

    class ConfigError(Error):

        exit_code = 3

    class DataError(Error):
        ...

    class InternalError(Error):
        ...
