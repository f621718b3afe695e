use rayon::prelude::*;

use super::{QuadraticForm, SamplerModel};
use crate::error::{Error, Result};
use crate::samples::{BitState, SampleSet};

/// Largest model [`solve_exact`] will enumerate.
pub const EXACT_VARIABLE_CAP: usize = 24;

/// Low bits walked in Gray-code order inside one chunk; each chunk starts
/// from a directly evaluated energy so incremental error stays bounded.
const CHUNK_BITS: usize = 12;

/// Enumerates all `2^N` states, sorted by ascending energy with ties ordered
/// by the state read as an unsigned integer.
pub fn solve_exact<M: SamplerModel>(model: &M) -> Result<SampleSet> {
    solve_exact_with_cap(model, EXACT_VARIABLE_CAP)
}

/// [`solve_exact`] with a lower variable cap.
pub fn solve_exact_with_cap<M: SamplerModel>(model: &M, cap: usize) -> Result<SampleSet> {
    let cap = cap.min(EXACT_VARIABLE_CAP);
    let form = model.quadratic_form();
    let n = form.num_variables();
    if n > cap {
        return Err(Error::TooManyVariables {
            num_variables: n,
            cap,
        });
    }
    let low_bits = n.min(CHUNK_BITS);
    let chunks: u64 = 1 << (n - low_bits);

    let mut energies: Vec<(u64, f64)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| enumerate_chunk(&form, n, low_bits, chunk))
        .collect();
    energies.par_sort_unstable_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let mut out = SampleSet::with_capacity(form.vartype(), n, energies.len());
    for (index, energy) in energies {
        out.push_words(&[index], energy, 1);
    }
    Ok(out)
}

fn enumerate_chunk(form: &QuadraticForm, n: usize, low_bits: usize, chunk: u64) -> Vec<(u64, f64)> {
    let base = chunk << low_bits;
    let mut state = BitState::from_index(n, base);
    let mut fields = form.local_fields(&state);
    let mut energy = form.energy(&state);
    let count = 1usize << low_bits;
    let mut out = Vec::with_capacity(count);
    out.push((base, energy));
    for k in 1..count {
        // k-th Gray code differs from the previous one in bit trailing_zeros(k)
        let i = k.trailing_zeros() as usize;
        energy += form.flip_delta(i, state.get(i), fields[i]);
        form.apply_flip(i, &mut state, &mut fields);
        out.push((state.words()[0], energy));
    }
    out
}
