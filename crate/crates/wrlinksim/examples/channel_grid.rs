//! C-band channel grid arithmetic and wavelength-plan construction.
//!
//! ```bash
//! cargo run --example channel_grid
//! ```

use wrlinksim::channels::{channel_table, dwdm_plan};
use wrlinksim::{bidi_plan, GridConvention};

fn main() -> wrlinksim::Result<()> {
    println!("channel  freq_thz  itu_nm     vendor_nm");
    for row in channel_table() {
        // print the band edges and the pair used by the stock scenarios
        if matches!(row.channel, 1 | 2 | 33 | 34 | 71 | 72) {
            println!(
                "{:>7}  {:>8.1}  {:>9.3}  {:>9.3}",
                row.channel, row.frequency_thz, row.itu_nm, row.vendor_nm
            );
        }
    }

    let dwdm = dwdm_plan(33, 34, GridConvention::ItuFrequency, 0.0, 0.0)?;
    println!(
        "\n{}: master tx {:.3} nm, slave tx {:.3} nm, separation {:.3} nm",
        dwdm.label,
        dwdm.lambda_ms_nm,
        dwdm.lambda_sm_nm,
        (dwdm.lambda_ms_nm - dwdm.lambda_sm_nm).abs()
    );

    let bidi = bidi_plan(true);
    println!(
        "{}: master tx {:.0} nm, slave tx {:.0} nm, separation {:.0} nm",
        bidi.label,
        bidi.lambda_ms_nm,
        bidi.lambda_sm_nm,
        (bidi.lambda_ms_nm - bidi.lambda_sm_nm).abs()
    );

    // both grid conventions agree on adjacent spacing to ~2 pm mid-band
    let vendor = dwdm_plan(33, 34, GridConvention::VendorLinear, 0.0, 0.0)?;
    println!(
        "grid conventions: ITU spacing {:.4} nm vs vendor spacing {:.4} nm",
        (dwdm.lambda_ms_nm - dwdm.lambda_sm_nm).abs(),
        (vendor.lambda_ms_nm - vendor.lambda_sm_nm).abs()
    );
    Ok(())
}
