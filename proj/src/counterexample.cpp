// Copyright 2026 The apcalc authors
// SPDX-License-Identifier: Apache-2.0
