# Generated by Django 5.2.10 on 2026-09-02 14:12

import django.db.models.deletion
import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('kind', models.CharField(choices=[('file', 'Model file'), ('bf_cylinder', 'BF cylinder grid'), ('properties', 'Property sweep')], help_text='What was verified', max_length=20)),
                ('model_id', models.CharField(help_text='Model identifier from the file or the builtin flags', max_length=255)),
                ('source', models.TextField(blank=True, default='', help_text='Model-file text, empty for builtin runs')),
                ('parameters', models.JSONField(blank=True, default=dict, help_text='Requested checks or builtin flags')),
                ('seed', models.IntegerField(blank=True, help_text='Seed of the randomized property sweeps, if any', null=True)),
                ('created_at', models.DateTimeField(db_index=True, default=django.utils.timezone.now, help_text='Run timestamp')),
                ('pass_count', models.PositiveIntegerField(default=0, help_text='Number of passing entries')),
                ('fail_count', models.PositiveIntegerField(default=0, help_text='Number of failing entries')),
                ('skipped_count', models.PositiveIntegerField(default=0, help_text='Number of skipped entries')),
                ('report', models.JSONField(default=dict, help_text='Canonical machine report')),
            ],
            options={
                'verbose_name': 'Verification Run',
                'verbose_name_plural': 'Verification Runs',
                'ordering': ['-created_at', '-id'],
            },
        ),
        migrations.CreateModel(
            name='CheckRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('position', models.PositiveIntegerField(help_text='Index of the entry in the report')),
                ('check_id', models.CharField(help_text='Check identifier', max_length=100)),
                ('model_id', models.CharField(help_text='Model the check was run on', max_length=255)),
                ('status', models.CharField(help_text='pass, fail or skipped', max_length=10)),
                ('residual', models.TextField(blank=True, default='', help_text='Normalised residual, empty when it vanishes')),
                ('anchor', models.CharField(blank=True, default='', help_text='The identity the check verifies', max_length=255)),
                ('details', models.JSONField(blank=True, default=dict, help_text='Auxiliary values such as ghost numbers or skip reasons')),
                ('wall_time', models.FloatField(default=0.0, help_text='Seconds spent on the check')),
                ('run', models.ForeignKey(help_text='Parent run', on_delete=django.db.models.deletion.CASCADE, related_name='entries', to='verification.verificationrun')),
            ],
            options={
                'verbose_name': 'Check Record',
                'verbose_name_plural': 'Check Records',
                'ordering': ['position'],
            },
        ),
        migrations.AddIndex(
            model_name='verificationrun',
            index=models.Index(fields=['kind', '-created_at'], name='verif_run_kind_created_idx'),
        ),
        migrations.AddIndex(
            model_name='checkrecord',
            index=models.Index(fields=['run', 'status'], name='verif_check_run_status_idx'),
        ),
    ]
