/* tslint:disable */
/* eslint-disable */

/**
 * Table-2 style study for RN, CSR and RR. Returns
 * `[|B|, N_z, saturations]` per mode in that order, flattened.
 */
export function dotprod_study(n: number, n_max: number, frac_bits: number, y_max: number, seed: bigint): Float64Array;

/**
 * Rounds `x` `draws` times. Returns rows of
 * `[outcome, observed frequency, exact probability]`, flattened.
 */
export function outcome_histogram(x: number, frac_bits: number, mode: string, draws: number, seed: bigint): Float64Array;

/**
 * Rounding laws over `[lo, hi]`. Returns `samples` rows of
 * `[x, p, expected, bias, variance]`, flattened.
 */
export function rounding_curves(mode: string, frac_bits: number, lo: number, hi: number, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly dotprod_study: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
    readonly outcome_histogram: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number, number];
    readonly rounding_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
