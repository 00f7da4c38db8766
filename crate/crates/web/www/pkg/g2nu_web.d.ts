/* tslint:disable */
/* eslint-disable */

/**
 * Eigenvalues of the odd signature operator on invariant even forms.
 */
export function b_spectrum(_case: string, p1: string, p2: string): string;

/**
 * Eigenvalues of D on one Fourier sector: the full 8×8 matrix for a
 * character, the first `truncation` Hermite blocks for an
 * infinite-dimensional representation.
 */
export function dirac_spectrum(_case: string, p1: string, p2: string, label: string, l1: number, l2: number, truncation: number): string;

/**
 * Full ν report: `text` holds the human-readable form, `report` the
 * structured one.
 */
export function nu_report(_case: string, p1: string, p2: string, l1: number, l2: number, cutoff: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly b_spectrum: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly dirac_spectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number) => [number, number];
    readonly nu_report: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
