"""Encoding detection for spec files"""
import chardet


def read_spec_text(path, log_func):
    """
    Read a spec file as bytes and decode it with the detected encoding.

    Args:
        path: Path to the spec file
        log_func: Function to call for logging messages

    Returns:
        Decoded text
    """
    with open(path, 'rb') as f:
        raw_data = f.read()
    return decode_spec_bytes(raw_data, log_func)


def decode_spec_bytes(raw_data, log_func):
    """Decode raw spec bytes, falling back to UTF-8 with replacement."""
    if raw_data.startswith(b'\xef\xbb\xbf'):
        return raw_data[3:].decode('utf-8')
    try:
        return raw_data.decode('utf-8')
    except UnicodeDecodeError:
        pass

    result = chardet.detect(raw_data)
    detected_encoding = (result or {}).get('encoding')
    confidence = (result or {}).get('confidence') or 0
    if not detected_encoding:
        log_func("⚠️ Could not detect spec encoding, decoding as UTF-8 with replacement")
        return raw_data.decode('utf-8', errors='replace')

    log_func(f"📝 Spec encoding detected: {detected_encoding} (confidence: {confidence:.2%})")
    try:
        return raw_data.decode(detected_encoding)
    except (LookupError, UnicodeDecodeError) as e:
        log_func(f"⚠️ Failed to decode spec as {detected_encoding}: {e}")
        return raw_data.decode('utf-8', errors='replace')
