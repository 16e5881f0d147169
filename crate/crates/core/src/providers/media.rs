//! Media byte handling and the asset-producing operations.
//!
//! Audio is 16-bit PCM WAV, mono, 24 kHz by default; images are PNG.
//! Durations and dimensions are always measured from the decoded payload,
//! never trusted from provider metadata.

use std::io::Cursor;
use std::path::Path;

use crate::fsutil::write_atomic;
use crate::schema::{Asset, AssetModality, Provenance};

use super::cache::{cache_key, cached_call, CacheStore};
use super::{
    AudioProvider, AudioSearchProvider, ImageProvider, ProviderError, SearchQuery, SpeechProvider,
};

pub const DEFAULT_SAMPLE_RATE: u32 = 24_000;

/// Encodes mono samples as 16-bit PCM WAV bytes.
pub fn encode_wav(samples: &[i16], sample_rate: u32) -> Vec<u8> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut cursor = Cursor::new(Vec::new());
    {
        let mut writer = hound::WavWriter::new(&mut cursor, spec).expect("in-memory wav writer");
        for &s in samples {
            writer.write_sample(s).expect("in-memory wav write");
        }
        writer.finalize().expect("in-memory wav finalize");
    }
    cursor.into_inner()
}

/// Duration in seconds measured from the decoded waveform.
pub fn measure_wav_duration(bytes: &[u8]) -> Result<f64, ProviderError> {
    let reader = hound::WavReader::new(Cursor::new(bytes))
        .map_err(|e| ProviderError::Malformed(format!("wav decode: {e}")))?;
    let spec = reader.spec();
    if spec.sample_rate == 0 {
        return Err(ProviderError::Malformed("wav has zero sample rate".to_string()));
    }
    let frames = reader.duration() as f64;
    Ok(frames / spec.sample_rate as f64)
}

/// Width and height of an encoded image.
pub fn measure_image_dims(bytes: &[u8]) -> Result<(u32, u32), ProviderError> {
    let img = image::load_from_memory(bytes)
        .map_err(|e| ProviderError::Malformed(format!("image decode: {e}")))?;
    Ok((img.width(), img.height()))
}

/// Generates an image, verifies its dimensions, and materializes it as an
/// asset file.
pub fn generate_image(
    provider: &dyn ImageProvider,
    cache: Option<&CacheStore>,
    prompt: &str,
    seed: u64,
    width: u32,
    height: u32,
    page_index: u32,
    dest: &Path,
) -> Result<Asset, ProviderError> {
    if prompt.trim().is_empty() {
        return Err(ProviderError::Precondition("image prompt is empty".to_string()));
    }
    let canonical = serde_json::json!({
        "kind": "image",
        "prompt": super::normalize_whitespace(prompt),
        "seed": seed,
        "width": width,
        "height": height,
    })
    .to_string();
    let (bytes, key) = cached_call(cache, provider.id(), &canonical, || {
        provider.generate(prompt, seed, width, height)
    })?;
    let (w, h) = measure_image_dims(&bytes)?;
    if (w, h) != (width, height) {
        return Err(ProviderError::Mismatch(format!(
            "requested {width}x{height} image, provider returned {w}x{h}"
        )));
    }
    write_atomic(dest, &bytes).map_err(|e| ProviderError::Provider {
        provider: provider.id().to_string(),
        message: format!("write {}: {e}", dest.display()),
    })?;
    Ok(Asset {
        modality: AssetModality::Image,
        page_index,
        location: dest.to_path_buf(),
        duration_s: 0.0,
        width: Some(w),
        height: Some(h),
        provenance: Provenance::Generated,
        provider_id: provider.id().to_string(),
        cache_key: key,
    })
}

/// Synthesizes narration speech and materializes it with its measured duration.
pub fn synthesize_speech(
    provider: &dyn SpeechProvider,
    cache: Option<&CacheStore>,
    text: &str,
    voice: &str,
    page_index: u32,
    dest: &Path,
) -> Result<Asset, ProviderError> {
    if text.trim().is_empty() {
        return Err(ProviderError::Precondition("speech text is empty".to_string()));
    }
    let canonical = serde_json::json!({
        "kind": "speech",
        "text": super::normalize_whitespace(text),
        "voice": voice,
    })
    .to_string();
    let (bytes, key) =
        cached_call(cache, provider.id(), &canonical, || provider.synthesize(text, voice))?;
    write_audio_asset(bytes, key, provider.id(), AssetModality::Speech, page_index, dest, Provenance::Generated)
}

/// Generates a sound effect or music track of roughly the target duration.
pub fn generate_audio(
    provider: &dyn AudioProvider,
    cache: Option<&CacheStore>,
    modality: AssetModality,
    prompt: &str,
    target_duration_s: f64,
    page_index: u32,
    dest: &Path,
) -> Result<Asset, ProviderError> {
    if prompt.trim().is_empty() {
        return Err(ProviderError::Precondition("audio prompt is empty".to_string()));
    }
    if target_duration_s <= 0.0 {
        return Err(ProviderError::Precondition(format!(
            "target duration must be positive, got {target_duration_s}"
        )));
    }
    let canonical = serde_json::json!({
        "kind": "audio",
        "modality": modality.to_string(),
        "prompt": super::normalize_whitespace(prompt),
        "target_duration_s": format!("{target_duration_s:.3}"),
    })
    .to_string();
    let (bytes, key) = cached_call(cache, provider.id(), &canonical, || {
        provider.generate(prompt, target_duration_s)
    })?;
    write_audio_asset(bytes, key, provider.id(), modality, page_index, dest, Provenance::Generated)
}

/// Retrieves the top-ranked search hit for the query and materializes it.
pub fn retrieve_audio(
    provider: &dyn AudioSearchProvider,
    cache: Option<&CacheStore>,
    modality: AssetModality,
    query: &SearchQuery,
    page_index: u32,
    dest: &Path,
) -> Result<Option<Asset>, ProviderError> {
    let violations = query.violations();
    if !violations.is_empty() {
        return Err(ProviderError::Precondition(violations.join("; ")));
    }
    let hits = provider.search(query)?;
    let Some(top) = hits.first() else {
        return Ok(None);
    };
    let canonical = serde_json::json!({
        "kind": "audio_fetch",
        "id": top.id,
        "preview": top.preview_location,
    })
    .to_string();
    let (bytes, key) = cached_call(cache, provider.id(), &canonical, || provider.fetch(top))?;
    let asset = write_audio_asset(
        bytes,
        key,
        provider.id(),
        modality,
        page_index,
        dest,
        Provenance::Retrieved,
    )?;
    Ok(Some(asset))
}

fn write_audio_asset(
    bytes: Vec<u8>,
    cache_key: String,
    provider_id: &str,
    modality: AssetModality,
    page_index: u32,
    dest: &Path,
    provenance: Provenance,
) -> Result<Asset, ProviderError> {
    let duration_s = measure_wav_duration(&bytes)?;
    if duration_s <= 0.0 {
        return Err(ProviderError::Provider {
            provider: provider_id.to_string(),
            message: "zero-duration audio".to_string(),
        });
    }
    write_atomic(dest, &bytes).map_err(|e| ProviderError::Provider {
        provider: provider_id.to_string(),
        message: format!("write {}: {e}", dest.display()),
    })?;
    Ok(Asset {
        modality,
        page_index,
        location: dest.to_path_buf(),
        duration_s,
        width: None,
        height: None,
        provenance,
        provider_id: provider_id.to_string(),
        cache_key,
    })
}

/// Runs a search with precondition checks and provider-side ranking kept.
pub fn search_audio(
    provider: &dyn AudioSearchProvider,
    query: &SearchQuery,
) -> Result<Vec<SearchHit>, ProviderError> {
    let violations = query.violations();
    if !violations.is_empty() {
        return Err(ProviderError::Precondition(violations.join("; ")));
    }
    let mut hits = provider.search(query)?;
    hits.truncate(query.limit as usize);
    Ok(hits)
}

/// Cache key helper exposed for tests asserting key stability.
pub fn media_cache_key(provider_id: &str, canonical: &str) -> String {
    cache_key(provider_id, canonical)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wav_round_trip_duration() {
        let samples = vec![0i16; DEFAULT_SAMPLE_RATE as usize * 3];
        let bytes = encode_wav(&samples, DEFAULT_SAMPLE_RATE);
        let duration = measure_wav_duration(&bytes).unwrap();
        assert!((duration - 3.0).abs() < 1e-9);
    }

    #[test]
    fn empty_wav_measures_zero() {
        let bytes = encode_wav(&[], DEFAULT_SAMPLE_RATE);
        assert_eq!(measure_wav_duration(&bytes).unwrap(), 0.0);
    }

    #[test]
    fn garbage_bytes_are_malformed() {
        assert!(measure_wav_duration(b"not a wav").is_err());
    }
}
