/** Recorded wire-format fixtures: payloads produced by the service's own
 * encoders, with the phenotype values it computed for them. */

export const FX = {
  "dims": [
    3,
    2,
    2
  ],
  "expected_phenotypes": {
    "lvedv_ml": 0.6000000000000001,
    "lvesv_ml": 0.4,
    "lvm_g": 0.42000000000000004,
    "rvedv_ml": 0.6000000000000001,
    "rvesv_ml": 0.2
  },
  "frame0_labels": [
    0,
    1,
    1,
    2,
    3,
    3,
    0,
    0,
    1,
    2,
    3,
    0
  ],
  "frame0_raw_b64": "AAEBAgMDAAABAgMA",
  "frame0_rle_b64": "AAEAAAABAgAAAAIBAAAAAwIAAAAAAgAAAAEBAAAAAgEAAAADAQAAAAABAAAA",
  "frame1_labels": [
    0,
    1,
    0,
    2,
    3,
    0,
    0,
    0,
    1,
    2,
    2,
    0
  ],
  "sequence_payload_raw": {
    "codec": "raw_b64",
    "dims": [
      3,
      2,
      2
    ],
    "frame_period_s": 0.045,
    "frames": [
      "AAEBAgMDAAABAgMA",
      "AAEAAgMAAAABAgIA"
    ],
    "phenotypes": {
      "lvedv_ml": 0.6000000000000001,
      "lvesv_ml": 0.4,
      "lvm_g": 0.42000000000000004,
      "rvedv_ml": 0.6000000000000001,
      "rvesv_ml": 0.2
    },
    "spacing_mm": [
      5.0,
      5.0,
      8.0
    ],
    "t_frames": 2
  },
  "sequence_payload_rle": {
    "codec": "rle_b64",
    "dims": [
      3,
      2,
      2
    ],
    "frame_period_s": 0.045,
    "frames": [
      "AAEAAAABAgAAAAIBAAAAAwIAAAAAAgAAAAEBAAAAAgEAAAADAQAAAAABAAAA",
      "AAEAAAABAQAAAAABAAAAAgEAAAADAQAAAAADAAAAAQEAAAACAgAAAAABAAAA"
    ],
    "phenotypes": {
      "lvedv_ml": 0.6000000000000001,
      "lvesv_ml": 0.4,
      "lvm_g": 0.42000000000000004,
      "rvedv_ml": 0.6000000000000001,
      "rvesv_ml": 0.2
    },
    "spacing_mm": [
      5.0,
      5.0,
      8.0
    ],
    "t_frames": 2
  },
  "spacing_mm": [
    5.0,
    5.0,
    8.0
  ],
  "sweep_stats": {
    "ci_half": [
      4.293026438306664,
      0.0,
      null
    ],
    "mean": [
      86.65,
      42.0,
      null
    ],
    "samples": [
      [
        88.0,
        91.5,
        79.25,
        90.0,
        84.5
      ],
      [
        42.0
      ],
      []
    ]
  }
} as const;
