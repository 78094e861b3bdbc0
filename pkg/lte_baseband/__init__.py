# Package marker - LTE downlink transmitter blocks (pure DSP functions + kernel behaviors)
from lte_baseband.alamouti import alamouti_code_matrix, alamouti_encode, alamouti_encode_pair
from lte_baseband.coding import encode_channel
from lte_baseband.grid import FramePlan, ResourceGrid, build_resource_grid
from lte_baseband.modulation import map_qam
from lte_baseband.ofdm import ofdm_modulate
from lte_baseband.params import OfdmParams, derive_ofdm_params
from lte_baseband.quantization import QuantizedSamples, quantize

__all__ = [
    "FramePlan",
    "OfdmParams",
    "QuantizedSamples",
    "ResourceGrid",
    "alamouti_code_matrix",
    "alamouti_encode",
    "alamouti_encode_pair",
    "build_resource_grid",
    "derive_ofdm_params",
    "encode_channel",
    "map_qam",
    "ofdm_modulate",
    "quantize",
]
