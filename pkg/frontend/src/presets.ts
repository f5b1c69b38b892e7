import type { CatalogDocument } from './types.js';
import type { AttributeInputs } from './form.js';

/**
 * Worked-example preset: a five-provider demo catalog with pre-normalized
 * offerings plus the matching request tuning. Loading it uploads the catalog
 * and fills the form, so the rendered ranking comes straight from the
 * service. The elasticity minimum (0.95) is back-solved so the threshold
 * utility lands at 0.2291.
 */

export const DEMO_CATALOG: CatalogDocument = {
  attributes: [
    { id: 'elasticity', display_name: 'Elasticity', tendency: 'positive', unit: '' },
    { id: 'upload_time', display_name: 'Upload time', tendency: 'negative', unit: 'seconds' },
    { id: 'cost', display_name: 'Cost', tendency: 'negative', unit: 'USD per node-hour' },
    { id: 'response_time', display_name: 'Service response time', tendency: 'negative', unit: 'seconds' },
    { id: 'availability', display_name: 'Availability', tendency: 'negative', unit: 'ratio' },
  ],
  mode: 'normalized',
  providers: [
    {
      provider_id: 'RF1',
      name: 'Render Farm One',
      capabilities: {
        software: [
          { product: '3ds max', version: '2009' },
          { product: 'maya', version: '7.0' },
        ],
        render_engines: ['mental ray', 'v-ray'],
        node_config: { cores: 16, ram_gb: 32 },
      },
      qos_offering: { elasticity: 0.75, upload_time: 0.98, cost: 0.97, response_time: 0.9, availability: 0.7 },
    },
    {
      provider_id: 'RF2',
      name: 'Render Farm Two',
      capabilities: {
        software: [
          { product: '3ds max', version: '2009' },
          { product: 'maya', version: '7.0' },
          { product: 'maya', version: '8.0' },
        ],
        render_engines: ['mental ray', 'v-ray', 'arnold'],
        node_config: { cores: 24, ram_gb: 48 },
      },
      qos_offering: { elasticity: 0.8, upload_time: 0.96, cost: 0.8, response_time: 0.95, availability: 0.85 },
    },
    {
      provider_id: 'RF3',
      name: 'Render Farm Three',
      capabilities: {
        software: [
          { product: '3ds max', version: '2009' },
          { product: 'maya', version: '7.0' },
          { product: 'blender', version: '2.49' },
        ],
        render_engines: ['mental ray', 'v-ray'],
        node_config: { cores: 32, ram_gb: 64 },
      },
      qos_offering: { elasticity: 0.95, upload_time: 0.9, cost: 0.85, response_time: 0.85, availability: 0.9 },
    },
    {
      provider_id: 'RF4',
      name: 'Render Farm Four',
      capabilities: {
        software: [{ product: '3ds max', version: '2009' }],
        render_engines: ['mental ray'],
        node_config: { cores: 8, ram_gb: 16 },
      },
      qos_offering: { elasticity: 0.6, upload_time: 0.94, cost: 0.7, response_time: 0.6, availability: 0.8 },
    },
    {
      provider_id: 'RF5',
      name: 'Render Farm Five',
      capabilities: {
        software: [{ product: 'maya', version: '7.0' }],
        render_engines: ['v-ray'],
        node_config: { cores: 16, ram_gb: 32 },
      },
      qos_offering: { elasticity: 0.85, upload_time: 0.92, cost: 0.8, response_time: 0.75, availability: 0.9 },
    },
  ],
};

export const DEMO_INPUTS: Record<string, AttributeInputs> = {
  elasticity: { weight: 0.1, sensitivity: 7, minimum: 0.95 },
  upload_time: { weight: 0.2, sensitivity: 5, minimum: 0.9 },
  cost: { weight: 0.3, sensitivity: 9, minimum: 0.7 },
  response_time: { weight: 0.3, sensitivity: 8, minimum: 0.6 },
  availability: { weight: 0.1, sensitivity: 4, minimum: 0.7 },
};

export const DEMO_ATTRIBUTE_ORDER = [
  'elasticity', 'upload_time', 'cost', 'response_time', 'availability',
];
