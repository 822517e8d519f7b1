//! C ABI over the pinv library.
//!
//! A workspace handle owns everything derived from one block-size list;
//! results travel as JSON strings allocated here and released with
//! [`pinv_string_free`]. Functions return [`PinvStatus`]; the last error
//! message is kept per workspace and readable via [`pinv_last_error`].

use std::collections::BTreeMap;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use pinv::canonical::{make_y_point, t_reduce};
use pinv::diagram::{render_diagram, DiagramFormat};
use pinv::jsonio::{
    diagram_json, invariants_json, point_from_json, point_to_json, transcript_to_json, PointJson,
};
use pinv::verify::{run_independence_checks, run_invariance_checks, Structure};

/// Result codes of every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum PinvStatus {
    Ok = 0,
    /// Verification ran and found a violated identity.
    VerificationFailed = 1,
    /// Bad arguments, bad JSON, or a degenerate input.
    InvalidInput = 2,
    /// Null pointer or invalid UTF-8 from the caller.
    BadPointer = 3,
}

/// Opaque workspace: one block structure with its derived data.
pub struct PinvWorkspace {
    structure: Structure,
    last_error: Option<CString>,
}

fn set_error(ws: &mut PinvWorkspace, message: String) {
    ws.last_error = CString::new(message).ok();
}

fn to_cstring(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Create a workspace from `len` block sizes. Returns null on invalid input.
///
/// # Safety
/// `sizes` must point to `len` readable u32 values.
#[no_mangle]
pub unsafe extern "C" fn pinv_workspace_new(sizes: *const u32, len: usize) -> *mut PinvWorkspace {
    if sizes.is_null() || len == 0 {
        return ptr::null_mut();
    }
    let sizes = std::slice::from_raw_parts(sizes, len);
    match Structure::new(sizes) {
        Ok(structure) => Box::into_raw(Box::new(PinvWorkspace {
            structure,
            last_error: None,
        })),
        Err(_) => ptr::null_mut(),
    }
}

/// Release a workspace created by [`pinv_workspace_new`].
///
/// # Safety
/// `ws` must be a pointer from [`pinv_workspace_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pinv_workspace_free(ws: *mut PinvWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must originate from this library and not have been freed before.
#[no_mangle]
pub unsafe extern "C" fn pinv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Last error message of this workspace, or null. Owned by the workspace;
/// do not free.
///
/// # Safety
/// `ws` must be a live workspace pointer.
#[no_mangle]
pub unsafe extern "C" fn pinv_last_error(ws: *const PinvWorkspace) -> *const c_char {
    let Some(ws) = ws.as_ref() else {
        return ptr::null();
    };
    ws.last_error
        .as_ref()
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// Matrix dimension n of the workspace's block structure.
///
/// # Safety
/// `ws` must be a live workspace pointer.
#[no_mangle]
pub unsafe extern "C" fn pinv_dimension(ws: *const PinvWorkspace) -> u32 {
    ws.as_ref().map_or(0, |ws| ws.structure.bs.n())
}

/// Generic orbit dimension: dim M minus the number of distinguished roots.
///
/// # Safety
/// `ws` must be a live workspace pointer.
#[no_mangle]
pub unsafe extern "C" fn pinv_orbit_dimension(ws: *const PinvWorkspace) -> i64 {
    ws.as_ref().map_or(-1, |ws| {
        pinv::canonical::orbit_dimension(&ws.structure.sets, &ws.structure.psi) as i64
    })
}

/// Marked diagram. `format` 0 = ASCII text, 1 = Unicode text, 2 = JSON.
/// The result is written to `*out` as a new string.
///
/// # Safety
/// `ws` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pinv_diagram(
    ws: *mut PinvWorkspace,
    format: u32,
    out: *mut *mut c_char,
) -> PinvStatus {
    let Some(ws) = ws.as_mut() else {
        return PinvStatus::BadPointer;
    };
    if out.is_null() {
        set_error(ws, "null output pointer".into());
        return PinvStatus::BadPointer;
    }
    let st = &ws.structure;
    let text = match format {
        0 => render_diagram(&st.bs, &st.ext, &st.psi, DiagramFormat::Ascii),
        1 => render_diagram(&st.bs, &st.ext, &st.psi, DiagramFormat::Unicode),
        2 => match serde_json::to_string_pretty(&diagram_json(&st.bs, &st.ext, &st.psi)) {
            Ok(s) => s,
            Err(e) => {
                set_error(ws, e.to_string());
                return PinvStatus::InvalidInput;
            }
        },
        _ => {
            set_error(ws, format!("unknown diagram format {format}"));
            return PinvStatus::InvalidInput;
        }
    };
    *out = to_cstring(text);
    PinvStatus::Ok
}

/// Invariant families as a JSON array. `which` is one of
/// "base", "extended", "A", "B", "all".
///
/// # Safety
/// `ws` must be live, `which` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pinv_invariants(
    ws: *mut PinvWorkspace,
    which: *const c_char,
    out: *mut *mut c_char,
) -> PinvStatus {
    let Some(ws) = ws.as_mut() else {
        return PinvStatus::BadPointer;
    };
    if which.is_null() || out.is_null() {
        set_error(ws, "null pointer argument".into());
        return PinvStatus::BadPointer;
    }
    let Ok(which) = CStr::from_ptr(which).to_str() else {
        set_error(ws, "which is not UTF-8".into());
        return PinvStatus::BadPointer;
    };
    let st = &ws.structure;
    match invariants_json(&st.family, &st.ext, &st.psi, which)
        .and_then(|list| Ok(serde_json::to_string_pretty(&list)?))
    {
        Ok(s) => {
            *out = to_cstring(s);
            PinvStatus::Ok
        }
        Err(e) => {
            set_error(ws, e.to_string());
            PinvStatus::InvalidInput
        }
    }
}

/// Randomized exact invariance checks plus Jacobian independence.
/// A human-readable report is written to `*out` when non-null.
///
/// # Safety
/// `ws` must be live; `out` may be null.
#[no_mangle]
pub unsafe extern "C" fn pinv_check(
    ws: *mut PinvWorkspace,
    trials: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> PinvStatus {
    let Some(ws) = ws.as_mut() else {
        return PinvStatus::BadPointer;
    };
    if trials == 0 {
        set_error(ws, "trials must be at least 1".into());
        return PinvStatus::InvalidInput;
    }
    let st = &ws.structure;
    let report = match run_invariance_checks(st, trials, seed) {
        Ok(r) => r,
        Err(e) => {
            set_error(ws, e.to_string());
            return PinvStatus::InvalidInput;
        }
    };
    let independent = run_independence_checks(st, seed);
    let mut summary = report.summary();
    if let Err(e) = &independent {
        summary = format!("{summary}; independence: {e}");
    }
    if !out.is_null() {
        *out = to_cstring(summary.clone());
    }
    if report.passed() && independent.is_ok() {
        PinvStatus::Ok
    } else {
        set_error(ws, summary);
        PinvStatus::VerificationFailed
    }
}

/// Reduce a Y-slice point (JSON, schema {"n", "entries"}) to its canonical
/// representative. Writes {"point", "transcript"} JSON to `*out`.
///
/// # Safety
/// `ws` must be live, `point_json` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pinv_canonicalize(
    ws: *mut PinvWorkspace,
    point_json: *const c_char,
    out: *mut *mut c_char,
) -> PinvStatus {
    let Some(ws) = ws.as_mut() else {
        return PinvStatus::BadPointer;
    };
    if point_json.is_null() || out.is_null() {
        set_error(ws, "null pointer argument".into());
        return PinvStatus::BadPointer;
    }
    let Ok(text) = CStr::from_ptr(point_json).to_str() else {
        set_error(ws, "point JSON is not UTF-8".into());
        return PinvStatus::BadPointer;
    };
    let st = &ws.structure;
    let result = (|| -> pinv::Result<String> {
        let json: PointJson = serde_json::from_str(text)?;
        let point = point_from_json(&json, &st.sets)?;
        let coeffs: BTreeMap<_, _> = point.support().map(|(r, v)| (r, v.clone())).collect();
        let y = make_y_point(&st.bs, &st.sets, &st.ext, &coeffs)?;
        let (x, transcript) = t_reduce(&y, &st.bs, &st.sets, &st.ext, &st.psi)?;
        Ok(serde_json::to_string_pretty(&serde_json::json!({
            "point": point_to_json(&x.point),
            "transcript": transcript_to_json(&transcript),
        }))?)
    })();
    match result {
        Ok(s) => {
            *out = to_cstring(s);
            PinvStatus::Ok
        }
        Err(e) => {
            set_error(ws, e.to_string());
            PinvStatus::InvalidInput
        }
    }
}
