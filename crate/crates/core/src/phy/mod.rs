//! OFDM physical layer used for the BER and frame-success experiments.

pub mod link;
pub mod ofdm;
pub mod qam;

pub use link::{
    frame_success_rate, simulate_link, spectrum_efficiency, transmit, zf_detect, Csi, LinkConfig,
    LinkReport, SnrPoint, StreamStats, ZeroForcing, FEC_THRESHOLD, FRAME_PAYLOAD_BITS,
};
pub use ofdm::{ofdm_demodulate, ofdm_modulate, OfdmConfig, OfdmEngine, OfdmSymbols};
pub use qam::{qam_demap, qam_map, Modulation};
